import logging
import os

from dotenv import load_dotenv

load_dotenv()


# Universal polynomial tables
WITT_MAX_N = int(os.getenv("WITT_MAX_N", 30))

# auto | ghost | table | cross
WITT_ARITHMETIC = os.getenv("WITT_ARITHMETIC", "auto").lower()

# Finite rings
WITT_FINITE_CAP = int(os.getenv("WITT_FINITE_CAP", 4096))

# Phi-module validation
WITT_LAMBDA_SAMPLES = int(os.getenv("WITT_LAMBDA_SAMPLES", 20))
WITT_SEED = int(os.getenv("WITT_SEED", 0))

# Logging
LOG_LEVEL = getattr(logging, os.getenv("LOG_LEVEL", "WARNING").upper(), logging.WARNING)
LOG_FILE = os.getenv("LOG_FILE", "")
