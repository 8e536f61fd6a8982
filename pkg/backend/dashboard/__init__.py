from .bp import bench_bp

__all__ = ["bench_bp"]
