"""Kernel selection: compiled polyline distance if the extension built,
pure-NumPy fallback otherwise.  Both implementations are exercised by the
test suite and compared in benchmarks/bench_kernels.py."""

try:
    from ._polyline_c import polyline_signed_distance  # type: ignore[attr-defined]

    KERNEL_BACKEND = "c"
except ImportError:  # pragma: no cover - depends on build environment
    from ._polyline_py import polyline_signed_distance

    KERNEL_BACKEND = "python"

__all__ = ["polyline_signed_distance", "KERNEL_BACKEND"]
