DEFAULT_CONFIG_PATH = "~/.kexchange/kexchange.ini"
CONFIG_PATH_ENV = "KEXCHANGE_CONFIG"

INSTANCE_FORMAT_VERSION = 1

DEFAULT_EPSILON = "1/2"
DEFAULT_CAP_CANDIDATES = 10**9
DEFAULT_BRUTE_CAP = 20
DEFAULT_CERTIFY_CAP = 15
DEFAULT_WITNESS_CAP = 20
DEFAULT_NAIVE_MAX_ITERS = 100

# Multiplier c in the soft oracle ceiling c * I * k^2 * n^(k^2 + 1).
ORACLE_CEILING_CONSTANT = 8

RATIO_PLACES = 6
