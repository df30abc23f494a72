import os
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

# Logging
LOG_LEVEL = os.getenv("HYPERDUAL_LOG_LEVEL", "INFO")

# Size caps for exponential work
STATE_SPACE_CAP = int(os.getenv("HYPERDUAL_STATE_SPACE_CAP", str(2 ** 20)))
FACE_CAP = int(os.getenv("HYPERDUAL_FACE_CAP", str(2 ** 20)))
HELLY_CLIQUE_CAP = int(os.getenv("HYPERDUAL_HELLY_CLIQUE_CAP", str(10 ** 6)))
OUTPUT_CAP = int(os.getenv("HYPERDUAL_OUTPUT_CAP", str(2 ** 20)))

# Numeric settings
DEFAULT_FIELD = os.getenv("HYPERDUAL_DEFAULT_FIELD", "real")
DEFAULT_SEED = int(os.getenv("HYPERDUAL_DEFAULT_SEED", "0"))
ENTROPY_TOLERANCE = 1e-9  # "sums to one" tolerance for entropy inputs

# Random instances
RANDOM_BIT_GENERATOR = "PCG64"
DEGENERATE_SHAPE_PROBABILITY = 0.1

# Serialization
FORMAT_VERSION = "hyperdual/1"
