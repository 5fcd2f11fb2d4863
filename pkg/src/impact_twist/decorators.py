import inspect
from functools import wraps

import numpy as np

from .exceptions import DomainError


def _validate_arguments(names, predicate, requirement):
    def decorator(func):
        sig = inspect.signature(func)
        missing = [name for name in names if name not in sig.parameters]
        if missing:
            raise TypeError(f"{func.__qualname__} has no parameter(s) {', '.join(missing)}")

        @wraps(func)
        def wrapper(*args, **kwargs):
            bound_args = sig.bind(*args, **kwargs)
            bound_args.apply_defaults()

            for name in names:
                value = bound_args.arguments[name]
                if value is not None and not predicate(value):
                    raise DomainError(name, value, requirement)

            return func(*args, **kwargs)

        return wrapper

    return decorator


def require_positive(*names):
    """
    Decorator to validate that the named arguments are finite and strictly positive.

    Scalars and numpy arrays are both accepted; an array passes only if every entry passes.
    """
    return _validate_arguments(names, _all_positive, "must be finite and > 0")


def require_nonnegative(*names):
    """
    Decorator to validate that the named arguments are finite and >= 0.
    """
    return _validate_arguments(names, _all_nonnegative, "must be finite and >= 0")


def _all_positive(value) -> bool:
    arr = np.asarray(value, dtype=float)
    return bool(np.all(np.isfinite(arr)) and np.all(arr > 0))


def _all_nonnegative(value) -> bool:
    arr = np.asarray(value, dtype=float)
    return bool(np.all(np.isfinite(arr)) and np.all(arr >= 0))
