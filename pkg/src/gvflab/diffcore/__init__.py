"""Minimal reverse-mode autodiff over dense arrays: the numeric substrate."""

from .check import gradient_check, max_relative_error, numeric_gradient
from .init import init
from .optim import Adam, AdamState, adam_step, clip_global_norm
from .rng import RngStream
from .tensor import (
    Tape,
    Tensor,
    active_tape,
    add,
    clip,
    concat,
    div,
    exp,
    log,
    matmul,
    maximum,
    minimum,
    mul,
    neg,
    no_grad,
    reduce_mean,
    reduce_sum,
    relu,
    reshape,
    sigmoid,
    slice_last,
    square,
    sub,
    take_rows,
    tanh,
)

__all__ = [
    "Adam", "AdamState", "RngStream", "Tape", "Tensor",
    "active_tape", "adam_step", "add", "clip", "clip_global_norm", "concat",
    "div", "exp", "gradient_check", "init", "log", "matmul", "max_relative_error",
    "maximum", "minimum", "mul", "neg", "no_grad", "numeric_gradient",
    "reduce_mean", "reduce_sum", "relu", "reshape", "sigmoid", "slice_last",
    "square", "sub", "take_rows", "tanh",
]
