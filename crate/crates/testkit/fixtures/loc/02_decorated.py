import functools


@functools.lru_cache(maxsize=None)
@staticmethod
def cached(n):
    if n < 2:
        return n

    return cached(n - 1) + cached(n - 2)
