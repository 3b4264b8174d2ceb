import os

DEFAULT_ENUM_CAP = 10**8
# above this many syndromes, collision detection switches from a table to a sort
SORT_THRESHOLD = 10**7


def enum_cap() -> int:
    raw = os.environ.get("PACKSET_ENUM_CAP")
    if raw is None or raw.strip() == "":
        return DEFAULT_ENUM_CAP
    return int(float(raw))


def numba_requested() -> bool:
    return os.environ.get("PACKSET_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")
