"""Atomic memory operations usable inside numba-compiled kernels.

numba does not expose CPU atomics, so these are built directly on LLVM's
``atomicrmw``/``cmpxchg`` instructions via llvmlite.  All operations use
monotonic ordering; cross-thread happens-before is provided by the
fork/join boundaries of the surrounding kernels.

All helpers operate on 1-D int64 arrays.  Floating point write-min is done
by the callers on the int64 bit pattern of non-negative float64 values,
whose ordering agrees with the float ordering.
"""

from numba import types
from numba.core import cgutils
from numba.extending import intrinsic

__all__ = [
    "atomic_add",
    "atomic_min",
    "atomic_max",
    "atomic_or",
    "atomic_cas",
]


def _item_pointer(context, builder, aryty, arr_v, idx_v):
    ary = context.make_array(aryty)(context, builder, arr_v)
    return cgutils.get_item_pointer(
        context, builder, aryty, ary, [idx_v], wraparound=False
    )


def _make_rmw(op):
    @intrinsic
    def rmw(typingctx, arr, idx, val):
        if not isinstance(arr, types.Array) or arr.dtype != types.int64:
            raise TypeError(f"atomic {op} requires an int64 array")
        sig = types.int64(arr, types.intp, types.int64)

        def codegen(context, builder, signature, args):
            arr_v, idx_v, val_v = args
            ptr = _item_pointer(context, builder, signature.args[0], arr_v, idx_v)
            return builder.atomic_rmw(op, ptr, val_v, "monotonic")

        return sig, codegen

    return rmw


#: atomic_add(arr, i, v) -> previous value
atomic_add = _make_rmw("add")
#: atomic_min(arr, i, v) -> previous value (signed min)
atomic_min = _make_rmw("min")
#: atomic_max(arr, i, v) -> previous value (signed max)
atomic_max = _make_rmw("max")
#: atomic_or(arr, i, v) -> previous value
atomic_or = _make_rmw("or")


@intrinsic
def atomic_cas(typingctx, arr, idx, expected, new):
    """atomic_cas(arr, i, expected, new) -> value observed before the swap.

    The swap happened iff the return value equals ``expected``.
    """
    if not isinstance(arr, types.Array) or arr.dtype != types.int64:
        raise TypeError("atomic_cas requires an int64 array")
    sig = types.int64(arr, types.intp, types.int64, types.int64)

    def codegen(context, builder, signature, args):
        arr_v, idx_v, exp_v, new_v = args
        ptr = _item_pointer(context, builder, signature.args[0], arr_v, idx_v)
        pair = builder.cmpxchg(ptr, exp_v, new_v, "monotonic", "monotonic")
        return builder.extract_value(pair, 0)

    return sig, codegen
