"""Grammar-bundle parser frontend: parse, prune, render."""

from .grammars import GrammarBundle, GrammarDirectory, default_grammars
from .parser import parse
from .tree import ParseTree, TreeNode, prune_concept, prune_depth, render_sexpr, token_count

__all__ = [
    "GrammarBundle",
    "GrammarDirectory",
    "ParseTree",
    "TreeNode",
    "default_grammars",
    "parse",
    "prune_concept",
    "prune_depth",
    "render_sexpr",
    "token_count",
]
