import enum


class ConsoleFormat(str, enum.Enum):
    text = "text"
    json = "json"


class SystemKind(str, enum.Enum):
    set_packing = "set_packing"
    explicit = "explicit"


class ObjectiveKind(str, enum.Enum):
    coverage = "coverage"
    linear = "linear"
    function = "function"


class Algorithm(str, enum.Enum):
    nols = "nols"
    oblivious = "oblivious"
    greedy = "greedy"
    linear_nols = "linear-nols"
    naive = "naive"


class PivotRule(str, enum.Enum):
    """How an improving move is picked among all improving candidates."""

    first = "first"
    best = "best"


class ExchangeAxiom(str, enum.Enum):
    """The three neighbourhood properties of an exchange witness."""

    shape = "shape"
    size = "size"
    load = "load"
    exchange = "exchange"


class AuditCheck(str, enum.Enum):
    local_optimum = "local-optimum"
    partition = "partition"
    weight_sum = "weight-sum"
    replacement_sum = "replacement-sum"
    local_inequality = "local-inequality"
    squared_weight = "squared-weight"
    charging = "charging"
    insertion = "insertion"
    neighbourhood_load = "neighbourhood-load"
    partition_submodularity = "partition-submodularity"
    union_bound = "union-bound"
    rounding_loss = "rounding-loss"
    ratio = "ratio"
