"""Adam optimizer with bias correction, plus gradient utilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import NumericError, UsageError
from .tensor import Tensor

NamedParams = list[tuple[str, Tensor]]


@dataclass
class AdamState:
    step_count: int
    learning_rate: float
    beta1: float
    beta2: float
    epsilon: float
    first_moment: dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(params: NamedParams, state: AdamState) -> None:
    """One Adam update over ``params``; missing grads count as zero.

    Gradients are left untouched — clearing them is the caller's job.
    """
    state.step_count += 1
    t = state.step_count
    c1 = 1.0 - state.beta1**t
    c2 = 1.0 - state.beta2**t
    lr, b1, b2, eps = state.learning_rate, state.beta1, state.beta2, state.epsilon
    for name, p in params:
        m = state.first_moment[name]
        v = state.second_moment[name]
        g = p.grad
        if g is None:
            m *= b1
            v *= b2
        else:
            if not np.isfinite(g).all():
                raise NumericError(f"non-finite gradient for parameter {name!r}")
            if g.shape != m.shape:
                raise UsageError(
                    f"gradient shape {g.shape} does not match parameter {name!r} {m.shape}"
                )
            m *= b1
            m += (1.0 - b1) * g
            v *= b2
            v += (1.0 - b2) * (g * g)
        update = (lr / c1) * m / (np.sqrt(v / c2) + eps)
        p.data -= update.astype(p.data.dtype, copy=False)


class Adam:
    """Stateful wrapper binding an AdamState to a fixed named parameter list."""

    def __init__(self, params: NamedParams, learning_rate: float,
                 beta1: float = 0.9, beta2: float = 0.999, epsilon: float = 1e-8):
        if learning_rate <= 0:
            raise UsageError(f"learning rate must be positive, got {learning_rate}")
        if not (0 < beta1 < 1 and 0 < beta2 < 1):
            raise UsageError(f"betas must lie in (0, 1), got {beta1}, {beta2}")
        names = [n for n, _ in params]
        if len(set(names)) != len(names):
            raise UsageError("duplicate parameter names handed to Adam")
        self.params: NamedParams = list(params)
        self.state = AdamState(
            step_count=0, learning_rate=learning_rate,
            beta1=beta1, beta2=beta2, epsilon=epsilon,
            first_moment={n: np.zeros_like(p.data, dtype=np.float64) for n, p in params},
            second_moment={n: np.zeros_like(p.data, dtype=np.float64) for n, p in params},
        )

    def step(self) -> None:
        adam_step(self.params, self.state)

    def clear_grads(self) -> None:
        for _, p in self.params:
            p.grad = None


def clip_global_norm(params: NamedParams, max_norm: float) -> float:
    """Scale all grads so their joint L2 norm is at most ``max_norm``.

    Returns the pre-clip norm.
    """
    total = 0.0
    for _, p in params:
        if p.grad is not None:
            total += float(np.sum(np.asarray(p.grad, dtype=np.float64) ** 2))
    norm = float(np.sqrt(total))
    if norm > max_norm and norm > 0:
        scale = max_norm / norm
        for _, p in params:
            if p.grad is not None:
                p.grad = p.grad * scale
    return norm
