#  Authors: The anosov-liouville developers
#
#  License: 3-clause BSD, see LICENSE
"""
Closed-form expressions for perturbation functions
==================================================

A tiny grammar for the functions `sigma` that the gauge and conformal actions take on the command line:

 - numbers and the constants `pi` and `e`,
 - the grid coordinates of the model (`t` for suspensions, `x`, `y`, `z` for the test torus),
 - `sin`, `cos` and `exp`,
 - `+`, `-`, `*` (also written `·`) and `/`, with parentheses and unary minus.

>>> evaluate("0.1 * sin(2 * pi * t)", {"t": 0.25})
0.1
"""

import ast
from typing import Dict, Union

import numpy as np

from .errors import ExpressionError
from .frames import FrameManifold, ScalarField

FUNCTIONS = {"sin": np.sin, "cos": np.cos, "exp": np.exp}
CONSTANTS = {"pi": np.pi, "e": np.e}

_BINARY = {
    ast.Add: np.add,
    ast.Sub: np.subtract,
    ast.Mult: np.multiply,
    ast.Div: np.divide,
}

Value = Union[float, np.ndarray]


def parse(text: str) -> ast.Expression:
    """Parse `text` and check that it only uses the supported grammar.

    Raises
    ------
    ExpressionError
        On syntax errors and unsupported constructs.
    """
    source = text.replace("·", "*").strip()
    if not source:
        raise ExpressionError("Empty expression")
    try:
        tree = ast.parse(source, mode="eval")
    except SyntaxError as e:
        raise ExpressionError(f"Invalid expression {text!r}: {e.msg} at column {e.offset}") from e

    for node in ast.walk(tree):
        if isinstance(node, (ast.Expression, ast.Load, ast.UnaryOp, ast.USub, ast.UAdd, ast.Name)):
            continue
        elif isinstance(node, ast.BinOp):
            if type(node.op) not in _BINARY:
                raise ExpressionError(f"Unsupported operator {type(node.op).__name__} in {text!r}")
        elif isinstance(node, tuple(_BINARY)):
            continue
        elif isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ExpressionError(f"Unsupported literal {node.value!r} in {text!r}")
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                raise ExpressionError(f"Unsupported function call in {text!r}. Available functions: {list(FUNCTIONS)}")
            if len(node.args) != 1 or node.keywords:
                raise ExpressionError(f"{node.func.id} takes exactly one argument in {text!r}")
        else:
            raise ExpressionError(f"Unsupported syntax {type(node).__name__} in {text!r}")
    return tree


def _eval(node: ast.AST, names: Dict[str, Value]) -> Value:
    if isinstance(node, ast.Expression):
        return _eval(node.body, names)
    elif isinstance(node, ast.Constant):
        return float(node.value)
    elif isinstance(node, ast.Name):
        if node.id in names:
            return names[node.id]
        if node.id in CONSTANTS:
            return CONSTANTS[node.id]
        raise ExpressionError(f"Unknown name {node.id!r}. Available names: {sorted(names) + sorted(CONSTANTS)}")
    elif isinstance(node, ast.UnaryOp):
        operand = _eval(node.operand, names)
        return -operand if isinstance(node.op, ast.USub) else operand
    elif isinstance(node, ast.BinOp):
        return _BINARY[type(node.op)](_eval(node.left, names), _eval(node.right, names))
    elif isinstance(node, ast.Call):
        return FUNCTIONS[node.func.id](_eval(node.args[0], names))
    raise ExpressionError(f"Unsupported expression node {type(node).__name__}")


def evaluate(text: str, names: Dict[str, Value]) -> Value:
    """Evaluate `text` with the given values (or arrays) bound to the coordinate names."""
    with np.errstate(divide="raise", invalid="raise", over="raise"):
        try:
            result = _eval(parse(text), names)
        except FloatingPointError as e:
            raise ExpressionError(f"Expression {text!r} can not be evaluated: {e}") from e
    return float(result) if np.ndim(result) == 0 else result


def sigma_field(manifold: FrameManifold, text: str) -> ScalarField:
    """Sample the expression `text` on the grid of `manifold`."""
    return ScalarField(evaluate(text, manifold.grid.mesh()), manifold)
