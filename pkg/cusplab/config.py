import os

# Defaults may be overridden through the environment or a .env file loaded by the CLI.
DEFAULT_MAX_CONDUCTOR = 120
DEFAULT_MAX_ORDER = 5000
DEFAULT_SEED = 0
DEFAULT_NUMERIC_DPS = 30


def max_conductor() -> int:
    """
    Upper bound on cyclotomic conductors.

    Returns:
    int: Value of CUSPLAB_MAX_CONDUCTOR, or DEFAULT_MAX_CONDUCTOR when unset.
    """
    return int(os.getenv('CUSPLAB_MAX_CONDUCTOR', DEFAULT_MAX_CONDUCTOR))


def max_order() -> int:
    """
    Soft cap on the order of enumerated groups.

    Returns:
    int: Value of CUSPLAB_MAX_ORDER, or DEFAULT_MAX_ORDER when unset.
    """
    return int(os.getenv('CUSPLAB_MAX_ORDER', DEFAULT_MAX_ORDER))


def default_seed() -> int:
    return int(os.getenv('CUSPLAB_SEED', DEFAULT_SEED))


def numeric_dps() -> int:
    return int(os.getenv('CUSPLAB_NUMERIC_DPS', DEFAULT_NUMERIC_DPS))
