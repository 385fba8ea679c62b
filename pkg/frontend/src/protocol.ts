// Wire protocol types and the text arithmetic the mirror needs.
//
// All offsets in the protocol count Unicode scalar values (code points),
// while JavaScript strings index UTF-16 units, so every edit application
// goes through an explicit conversion.  Edits arrive in pre-edit
// coordinates and are applied in descending start order, which keeps the
// earlier offsets valid while later text shifts.

export type OpName =
  | "up"
  | "down"
  | "next"
  | "prev"
  | "select"
  | "transpose"
  | "delete"
  | "move"
  | "extract"
  | "jump";

export interface EditSpan {
  start: number;
  end: number;
  text: string;
}

export interface EngineRequest {
  id: number;
  buffer: string;
  op: OpName | "open" | "edit";
  cursor?: number;
  version?: number;
  args?: Record<string, unknown>;
}

export interface SuccessResponse {
  id: number | null;
  ok: true;
  edits: EditSpan[];
  cursor: number;
  selection?: [number, number];
  version: number;
}

export interface FailureResponse {
  id: number | null;
  ok: false;
  code: string;
  message: string;
  position?: number;
}

export type EngineResponse = SuccessResponse | FailureResponse;

export function parseResponse(line: string): EngineResponse {
  const decoded = JSON.parse(line);
  if (typeof decoded !== "object" || decoded === null || typeof decoded.ok !== "boolean") {
    throw new Error(`not a protocol response: ${line}`);
  }
  return decoded as EngineResponse;
}

/** Number of Unicode code points in the string. */
export function cpLength(text: string): number {
  let n = 0;
  for (const _ of text) n++;
  return n;
}

/** UTF-16 index of the code point at `offset` (cpLength(text) maps to text.length). */
export function cpIndex(text: string, offset: number): number {
  if (offset < 0) throw new RangeError(`negative offset ${offset}`);
  let index = 0;
  let remaining = offset;
  while (remaining > 0) {
    if (index >= text.length) throw new RangeError(`offset ${offset} past end of text`);
    const code = text.codePointAt(index)!;
    index += code > 0xffff ? 2 : 1;
    remaining--;
  }
  return index;
}

/** Slice by code-point offsets, mirroring the protocol's coordinates. */
export function cpSlice(text: string, start: number, end: number): string {
  return text.slice(cpIndex(text, start), cpIndex(text, end));
}

/**
 * Apply one atomic transaction to the mirror.  Throws on overlapping or
 * out-of-range edits — those indicate a protocol violation, not a state
 * to recover from.
 */
export function applyEdits(text: string, edits: readonly EditSpan[]): string {
  const sorted = [...edits].sort((a, b) => a.start - b.start);
  const length = cpLength(text);
  let previousEnd = -1;
  for (const edit of sorted) {
    if (edit.start > edit.end) throw new RangeError(`inverted edit ${edit.start}..${edit.end}`);
    if (edit.start < previousEnd) throw new RangeError("overlapping edits");
    if (edit.end > length) throw new RangeError(`edit ${edit.start}..${edit.end} past end (${length})`);
    previousEnd = edit.end;
  }
  let result = text;
  for (const edit of sorted.reverse()) {
    const from = cpIndex(result, edit.start);
    const to = cpIndex(result, edit.end);
    result = result.slice(0, from) + edit.text + result.slice(to);
  }
  return result;
}

/**
 * The single replaced span that turns `before` into `after`, or null when
 * they are equal.  Used to report textarea typing to the engine as one
 * "edit" request: common prefix and suffix are peeled off, whatever is
 * left in the middle was replaced.
 */
export function diffSpan(before: string, after: string): EditSpan | null {
  if (before === after) return null;
  const a = Array.from(before);
  const b = Array.from(after);
  let prefix = 0;
  while (prefix < a.length && prefix < b.length && a[prefix] === b[prefix]) prefix++;
  let suffix = 0;
  while (
    suffix < a.length - prefix &&
    suffix < b.length - prefix &&
    a[a.length - 1 - suffix] === b[b.length - 1 - suffix]
  ) {
    suffix++;
  }
  return {
    start: prefix,
    end: a.length - suffix,
    text: b.slice(prefix, b.length - suffix).join(""),
  };
}
