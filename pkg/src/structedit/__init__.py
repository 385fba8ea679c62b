"""structedit: a structural-editing engine for a mini-ML language.

Parses source into a concrete syntax tree with exact text bounds,
navigates it through a bounds-tracking zipper, and turns structural
operations (transpose, delete, extract, jumps...) into atomic text-edit
transactions any editor can apply.
"""

from .cst import (
    ChildRole,
    CstNode,
    NodeKind,
    child_role,
    node_at,
    structural_equal,
    tree_shape_valid,
    wrap_sequence,
)
from .errors import StructuralEditError
from .ops import (
    OpResult,
    extract_expression,
    jump_to,
    structural_delete,
    structural_down,
    structural_move,
    structural_next,
    structural_prev,
    structural_select,
    structural_transpose,
    structural_up,
)
from .parser import ParseDiagnostic, parse, parse_expression
from .session import EditorService, Session, handle_message, serve_stdio
from .textmodel import (
    Buffer,
    Edit,
    EditTransaction,
    TextRegion,
    adjust_region,
    apply_edits,
    apply_transaction,
    region_contains,
)
from .zipper import (
    Node,
    Top,
    Zipper,
    go_down,
    go_next,
    go_prev,
    go_up,
    refocus,
    unzip,
    zipper_at,
)

__version__ = "0.1.0"

__all__ = [
    "Buffer",
    "ChildRole",
    "CstNode",
    "Edit",
    "EditTransaction",
    "EditorService",
    "Node",
    "NodeKind",
    "OpResult",
    "ParseDiagnostic",
    "Session",
    "StructuralEditError",
    "TextRegion",
    "Top",
    "Zipper",
    "adjust_region",
    "apply_edits",
    "apply_transaction",
    "child_role",
    "extract_expression",
    "go_down",
    "go_next",
    "go_prev",
    "go_up",
    "handle_message",
    "jump_to",
    "node_at",
    "parse",
    "parse_expression",
    "refocus",
    "region_contains",
    "serve_stdio",
    "structural_delete",
    "structural_down",
    "structural_equal",
    "structural_move",
    "structural_next",
    "structural_prev",
    "structural_select",
    "structural_transpose",
    "structural_up",
    "tree_shape_valid",
    "unzip",
    "wrap_sequence",
    "zipper_at",
    "__version__",
]
