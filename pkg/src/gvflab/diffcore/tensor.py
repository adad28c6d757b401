"""Dense tensors with reverse-mode automatic differentiation.

Ops record themselves on the active :class:`Tape` (a context manager) in
construction order, which is a topological order by definition. ``backward``
replays the records in reverse, accumulating gradients additively into the
``grad`` slot of every leaf tensor that requires them. Broadcasting follows
numpy's trailing-dimension rules; gradients of broadcast operands are summed
back to the operand shape.

Float32 is the default dtype; ops preserve the dtype of their inputs, so a
graph built from float64 tensors runs entirely in float64 (used by the
finite-difference checks).
"""

from __future__ import annotations

from typing import Callable, Optional, Sequence

import numpy as np

from ..errors import DimensionError, DomainError, UsageError

_TAPE_STACK: list[Optional["Tape"]] = []


def active_tape() -> Optional["Tape"]:
    return _TAPE_STACK[-1] if _TAPE_STACK else None


class no_grad:
    """Context manager disabling tape recording (forward-only fast path)."""

    def __enter__(self):
        _TAPE_STACK.append(None)
        return self

    def __exit__(self, *exc):
        _TAPE_STACK.pop()
        return False


class Tensor:
    """Dense numeric array that can participate in gradient taping."""

    __slots__ = ("data", "grad", "requires_grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data, dtype=dtype)
        if arr.dtype.kind != "f":
            arr = arr.astype(np.float32)
        self.data = arr
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data)

    def detach(self) -> "Tensor":
        return Tensor(self.data)

    def zero_grad(self) -> None:
        self.grad = None

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # operator sugar; all of these defer to the module-level ops
    def __add__(self, other):
        return add(self, _lift(other))

    def __radd__(self, other):
        return add(_lift(other), self)

    def __sub__(self, other):
        return sub(self, _lift(other))

    def __rsub__(self, other):
        return sub(_lift(other), self)

    def __mul__(self, other):
        return mul(self, _lift(other))

    def __rmul__(self, other):
        return mul(_lift(other), self)

    def __truediv__(self, other):
        return div(self, _lift(other))

    def __matmul__(self, other):
        return matmul(self, _lift(other))

    def __neg__(self):
        return neg(self)

    def sum(self, axis=None, keepdims=False):
        return reduce_sum(self, axis=axis, keepdims=keepdims)

    def mean(self, axis=None, keepdims=False):
        return reduce_mean(self, axis=axis, keepdims=keepdims)

    def reshape(self, *shape):
        return reshape(self, shape if len(shape) != 1 else shape[0])


def _lift(x) -> Tensor:
    return x if isinstance(x, Tensor) else Tensor(x)


class Tape:
    """Ordered record of differentiable operations.

    Nodes are ``(output, inputs, backward_fn)`` triples appended in forward
    order. ``backward`` propagates through them in reverse; intermediate
    gradients are kept in a scratch map and only graph leaves receive
    (additive) ``grad`` updates, so repeating ``backward`` doubles leaf grads.
    """

    __slots__ = ("nodes",)

    def __init__(self):
        self.nodes: list[tuple[Tensor, tuple[Tensor, ...], Callable]] = []

    def __enter__(self) -> "Tape":
        _TAPE_STACK.append(self)
        return self

    def __exit__(self, *exc):
        _TAPE_STACK.pop()
        return False

    def backward(self, root: Tensor, seed=None) -> None:
        if not root.requires_grad:
            raise UsageError("backward from a tensor that does not require grad")
        if seed is None:
            g0 = np.ones_like(root.data)
        else:
            g0 = np.asarray(seed, dtype=root.data.dtype)
            if g0.shape != root.data.shape:
                raise DimensionError(
                    f"backward seed shape {g0.shape} != root shape {root.data.shape}"
                )
        scratch: dict[int, list] = {id(root): [root, g0]}
        for out, inputs, fn in reversed(self.nodes):
            entry = scratch.pop(id(out), None)
            if entry is None:
                continue
            for inp, gi in zip(inputs, fn(entry[1])):
                if gi is None or not inp.requires_grad:
                    continue
                key = id(inp)
                held = scratch.get(key)
                if held is None:
                    scratch[key] = [inp, gi]
                else:
                    held[1] = held[1] + gi
        for tensor, g in scratch.values():
            tensor.grad = g.copy() if tensor.grad is None else tensor.grad + g


def _record(out_data: np.ndarray, inputs: tuple[Tensor, ...], backward: Callable) -> Tensor:
    tape = active_tape()
    out = Tensor.__new__(Tensor)
    out.data = out_data
    out.grad = None
    if tape is not None and any(t.requires_grad for t in inputs):
        out.requires_grad = True
        tape.nodes.append((out, inputs, backward))
    else:
        out.requires_grad = False
    return out


def _unbroadcast(g: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    if g.shape == shape:
        return g
    extra = g.ndim - len(shape)
    if extra > 0:
        g = g.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, s in enumerate(shape) if s == 1 and g.shape[i] != 1)
    if axes:
        g = g.sum(axis=axes, keepdims=True)
    return g


def _binary(a: Tensor, b: Tensor, forward: Callable, backward_maker: Callable, opname: str) -> Tensor:
    ad, bd = a.data, b.data
    try:
        out = forward(ad, bd)
    except ValueError:
        raise DimensionError(
            f"{opname}: shapes {ad.shape} and {bd.shape} are not broadcastable"
        ) from None
    return _record(out, (a, b), backward_maker(ad, bd, out))


# ---------------------------------------------------------------------------
# elementwise ops


def add(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        return lambda g: (_unbroadcast(g, ad.shape), _unbroadcast(g, bd.shape))

    return _binary(a, b, np.add, bwd, "add")


def sub(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        return lambda g: (_unbroadcast(g, ad.shape), _unbroadcast(-g, bd.shape))

    return _binary(a, b, np.subtract, bwd, "sub")


def mul(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        return lambda g: (_unbroadcast(g * bd, ad.shape), _unbroadcast(g * ad, bd.shape))

    return _binary(a, b, np.multiply, bwd, "mul")


def div(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        return lambda g: (
            _unbroadcast(g / bd, ad.shape),
            _unbroadcast(-g * ad / (bd * bd), bd.shape),
        )

    return _binary(a, b, np.divide, bwd, "div")


def maximum(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        def fn(g):
            take_a = ad >= bd
            return _unbroadcast(g * take_a, ad.shape), _unbroadcast(g * ~take_a, bd.shape)

        return fn

    return _binary(a, b, np.maximum, bwd, "maximum")


def minimum(a: Tensor, b: Tensor) -> Tensor:
    def bwd(ad, bd, out):
        def fn(g):
            take_a = ad <= bd
            return _unbroadcast(g * take_a, ad.shape), _unbroadcast(g * ~take_a, bd.shape)

        return fn

    return _binary(a, b, np.minimum, bwd, "minimum")


def neg(a: Tensor) -> Tensor:
    return _record(-a.data, (a,), lambda g: (-g,))


def relu(a: Tensor) -> Tensor:
    ad = a.data
    out = np.maximum(ad, 0)
    return _record(out, (a,), lambda g: (g * (ad > 0),))


def tanh(a: Tensor) -> Tensor:
    out = np.tanh(a.data)
    return _record(out, (a,), lambda g: (g * (1.0 - out * out),))


def sigmoid(a: Tensor) -> Tensor:
    ad = a.data
    e = np.exp(-np.abs(ad))
    out = np.where(ad >= 0, 1.0 / (1.0 + e), e / (1.0 + e))
    return _record(out, (a,), lambda g: (g * out * (1.0 - out),))


def square(a: Tensor) -> Tensor:
    ad = a.data
    return _record(ad * ad, (a,), lambda g: (2.0 * g * ad,))


def exp(a: Tensor) -> Tensor:
    out = np.exp(a.data)
    return _record(out, (a,), lambda g: (g * out,))


def log(a: Tensor) -> Tensor:
    ad = a.data
    if not (ad > 0).all():
        raise DomainError("log: input has non-positive entries")
    return _record(np.log(ad), (a,), lambda g: (g / ad,))


def clip(a: Tensor, lo: float, hi: float) -> Tensor:
    ad = a.data
    out = np.clip(ad, lo, hi)
    return _record(out, (a,), lambda g: (g * ((ad >= lo) & (ad <= hi)),))


# ---------------------------------------------------------------------------
# matmul and reductions


def matmul(a: Tensor, b: Tensor) -> Tensor:
    ad, bd = a.data, b.data
    if ad.ndim != 2 or bd.ndim != 2 or ad.shape[1] != bd.shape[0]:
        raise DimensionError(f"matmul: incompatible shapes {ad.shape} x {bd.shape}")
    out = ad @ bd

    def fn(g):
        return g @ bd.T, ad.T @ g

    return _record(out, (a, b), fn)


def _check_axis(ndim: int, axis) -> None:
    if axis is not None and not -ndim <= axis < ndim:
        raise DimensionError(f"axis {axis} out of range for {ndim}-dimensional tensor")


def reduce_sum(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    ad = a.data
    _check_axis(ad.ndim, axis)
    out = ad.sum(axis=axis, keepdims=keepdims)

    def fn(g):
        gg = g
        if axis is not None and not keepdims:
            gg = np.expand_dims(gg, axis)
        return (np.broadcast_to(gg, ad.shape).copy(),)

    return _record(out, (a,), fn)


def reduce_mean(a: Tensor, axis=None, keepdims: bool = False) -> Tensor:
    ad = a.data
    _check_axis(ad.ndim, axis)
    out = ad.mean(axis=axis, keepdims=keepdims)
    n = ad.size if axis is None else ad.shape[axis]

    def fn(g):
        gg = g
        if axis is not None and not keepdims:
            gg = np.expand_dims(gg, axis)
        return (np.broadcast_to(gg, ad.shape).copy() / n,)

    return _record(out, (a,), fn)


# ---------------------------------------------------------------------------
# structural ops


def reshape(a: Tensor, shape) -> Tensor:
    ad = a.data
    try:
        out = ad.reshape(shape)
    except ValueError:
        raise DimensionError(f"reshape: cannot view {ad.shape} as {shape}") from None
    return _record(out, (a,), lambda g: (g.reshape(ad.shape),))


def concat(tensors: Sequence[Tensor], axis: int = -1) -> Tensor:
    datas = [t.data for t in tensors]
    try:
        out = np.concatenate(datas, axis=axis)
    except ValueError:
        raise DimensionError(
            f"concat: shapes {[d.shape for d in datas]} do not align on axis {axis}"
        ) from None
    sizes = [d.shape[axis] for d in datas]
    offsets = np.cumsum(sizes)[:-1]

    def fn(g):
        return tuple(np.split(g, offsets, axis=axis))

    return _record(out, tuple(tensors), fn)


def slice_last(a: Tensor, start: int, stop: int) -> Tensor:
    ad = a.data
    if not 0 <= start <= stop <= ad.shape[-1]:
        raise DimensionError(
            f"slice_last: [{start}:{stop}] out of range for last dim {ad.shape[-1]}"
        )
    out = ad[..., start:stop]

    def fn(g):
        z = np.zeros_like(ad)
        z[..., start:stop] = g
        return (z,)

    return _record(out, (a,), fn)


def take_rows(a: Tensor, idx) -> Tensor:
    """out[i] = a[i, idx[i]] for a 2-D tensor; used for per-row selection."""
    ad = a.data
    if ad.ndim != 2:
        raise DimensionError(f"take_rows expects a 2-D tensor, got shape {ad.shape}")
    idx = np.asarray(idx, dtype=np.intp)
    if idx.shape != (ad.shape[0],):
        raise DimensionError(f"take_rows: index shape {idx.shape} != ({ad.shape[0]},)")
    rows = np.arange(ad.shape[0])
    out = ad[rows, idx]

    def fn(g):
        z = np.zeros_like(ad)
        z[rows, idx] = g
        return (z,)

    return _record(out, (a,), fn)
