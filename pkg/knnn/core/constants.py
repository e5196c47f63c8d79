"""Method names, defaults and file-format constants."""

METHODS = ("knn", "global", "local", "knnn")

# Scorer defaults: 3 neighbors, 25 neighbors-of-neighbors, sets of 5 features
DEFAULT_K = 3
DEFAULT_K_NNN = 25
DEFAULT_SET_WIDTH = 5

SHAPES = ("moons", "circles", "swissroll", "threelines", "twoarcs", "fig6")
PLANAR_SHAPES = ("moons", "circles", "swissroll", "threelines", "twoarcs")

# Noise stays below the sample spacing at the default training size
DEFAULT_NOISE = {
    "moons": 0.0125,
    "circles": 0.005,
    "swissroll": 0.01,
    "threelines": 0.0,
    "twoarcs": 0.03,
    "fig6": 0.0,
}

PAIR_CORRELATION = 0.95

# fig6 anomalies: offset along each pair's minor axis, in units of its std-dev
CORRELATION_BREAK_SHIFT = 3.0

# Fraction of the sampled extent added on each side of a box
NEGATIVES_MARGIN = 0.0
HEATMAP_MARGIN = 0.2

DEFAULT_N_TRAIN = 250
DEFAULT_N_TEST = 5000
DEFAULT_RESOLUTION = (200, 200)

# Model file
MODEL_MAGIC = b"KNNN"
MODEL_VERSION = 1
FLOOR_POLICY_RELATIVE = 1
FLAG_PACKS = 0x01
FLAG_GLOBAL = 0x02

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3

SWEEP_CSV_HEADER = ("method", "k", "k_nnn", "L", "n", "reorder", "auroc")

METHOD_COLOR = {
    "knn": "cyan",
    "global": "yellow",
    "local": "magenta",
    "knnn": "bold green",
}

# CLI exit codes
EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_USAGE = 2
