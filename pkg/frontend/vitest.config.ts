import { defineConfig } from "vitest/config";

// The end-to-end suite drives a real `structedit serve` subprocess, so give
// tests more headroom than the default five seconds.
export default defineConfig({
  test: {
    testTimeout: 20000,
    hookTimeout: 20000,
  },
});
