"""Central finite-difference gradient checking.

The numeric side never touches the tape: it re-evaluates the forward function
at perturbed parameter values, which keeps it an independent oracle for the
analytic backward rules.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .tensor import Tape, Tensor, no_grad


def numeric_gradient(fn: Callable[[], Tensor], tensor: Tensor, step: float = 1e-4) -> np.ndarray:
    """d fn / d tensor by central differences, one coordinate at a time."""
    flat = tensor.data.reshape(-1)
    grad = np.zeros_like(flat, dtype=np.float64)
    with no_grad():
        for i in range(flat.size):
            orig = flat[i]
            flat[i] = orig + step
            hi = fn().item()
            flat[i] = orig - step
            lo = fn().item()
            flat[i] = orig
            grad[i] = (hi - lo) / (2.0 * step)
    return grad.reshape(tensor.data.shape)


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> float:
    a = np.asarray(analytic, dtype=np.float64)
    n = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.maximum(np.abs(a), np.abs(n)), floor)
    return float(np.max(np.abs(a - n) / denom))


def gradient_check(fn: Callable[[], Tensor], wrt: Sequence[Tensor],
                   step: float = 1e-4, floor: float = 1e-6) -> float:
    """Max relative error between backward grads and finite differences.

    ``fn`` must rebuild the (scalar-output) computation from scratch on every
    call so the numeric perturbations are observed.
    """
    for t in wrt:
        t.grad = None
    with Tape() as tape:
        loss = fn()
        tape.backward(loss)
    worst = 0.0
    for t in wrt:
        analytic = t.grad if t.grad is not None else np.zeros_like(t.data)
        numeric = numeric_gradient(fn, t, step=step)
        worst = max(worst, max_relative_error(analytic, numeric, floor=floor))
    return worst
