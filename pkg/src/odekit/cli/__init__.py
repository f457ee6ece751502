"""Expression parser and command-line front end."""
from .expr import ExprAst, ExprError, Scope, evaluate, parse, render
from .main import main

__all__ = ["ExprAst", "ExprError", "Scope", "evaluate", "main", "parse", "render"]
