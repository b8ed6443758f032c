"""
Configuration file for posetring
Copy to config.py and edit these values to tune the computations
"""

import os

from sympy import isprime

# ============================================================================
# COEFFICIENT FIELD
# ============================================================================

# "rational" for QQ, or "gf:<p>" for a prime field
DEFAULT_FIELD = os.getenv("POSETRING_FIELD", "rational")


# ============================================================================
# LINEAR ALGEBRA
# ============================================================================

# Matrices with at most this many rows and columns use the dense numpy path
DENSE_CUTOFF = 64

# Pivot choice for sparse elimination: "markowitz" or "natural"
PIVOTING = "markowitz"

# Posets whose incidence signs and local cohomology tables stay cached
POSET_CACHE_SIZE = 128

# Cached K_x complexes across all posets and fields
K_COMPLEX_CACHE_SIZE = 4096


# ============================================================================
# FACE RING
# ============================================================================

# Rewrite steps allowed before straightening gives up
STRAIGHTEN_STEP_BUDGET = 100000


# ============================================================================
# ORACLES
# ============================================================================

ORACLE_SEED = 0
ORACLE_RING_PRODUCTS = 200      # random M-degree pairs multiplied both ways
ORACLE_RING_TRIPLES = 100       # associativity / commutativity samples
ORACLE_INJ_COMPLEXES = 50       # random complexes for the duality check
ORACLE_LAMBDA_MODULES = 20      # random modules resolved then dualized twice


# ============================================================================
# RANDOM GENERATOR
# ============================================================================

RANDOM_MAX_VERTICES = 8
RANDOM_MAX_FACET_SIZE = 4
RANDOM_MAX_DOUBLINGS = 3        # 0 = only simplicial complexes


# ============================================================================
# LOGGING CONFIGURATION
# ============================================================================

# Logging level: DEBUG, INFO, WARNING, ERROR, CRITICAL
LOG_LEVEL = "INFO"

# Log file (None = console only)
LOG_FILE = None

# Log format
LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


# ============================================================================
# VALIDATION
# ============================================================================

def validate_config():
    """Validate configuration values"""
    errors = []

    field = DEFAULT_FIELD.strip().lower()
    if field.startswith("gf:"):
        modulus = field[3:]
        if not modulus.isdigit() or not isprime(int(modulus)):
            errors.append(f"DEFAULT_FIELD modulus must be a prime, got '{modulus}'")
    elif field not in ("rational", "q", "qq"):
        errors.append("DEFAULT_FIELD must be 'rational' or 'gf:<p>'")

    if PIVOTING not in ("markowitz", "natural"):
        errors.append("PIVOTING must be 'markowitz' or 'natural'")

    if DENSE_CUTOFF < 0:
        errors.append("DENSE_CUTOFF must be non-negative")

    if POSET_CACHE_SIZE < 1 or K_COMPLEX_CACHE_SIZE < 1:
        errors.append("Cache sizes must be positive")

    if STRAIGHTEN_STEP_BUDGET < 1:
        errors.append("STRAIGHTEN_STEP_BUDGET must be positive")

    for name in ("ORACLE_RING_PRODUCTS", "ORACLE_RING_TRIPLES", "ORACLE_INJ_COMPLEXES", "ORACLE_LAMBDA_MODULES"):
        if globals()[name] < 1:
            errors.append(f"{name} must be positive")

    if not 1 <= RANDOM_MAX_VERTICES <= 8:
        errors.append("RANDOM_MAX_VERTICES must be between 1 and 8")

    if RANDOM_MAX_FACET_SIZE > RANDOM_MAX_VERTICES:
        errors.append("RANDOM_MAX_FACET_SIZE must not exceed RANDOM_MAX_VERTICES")

    if LOG_LEVEL not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
        errors.append(f"Unknown LOG_LEVEL '{LOG_LEVEL}'")

    if errors:
        print("\n⚠️  Configuration Errors:")
        for error in errors:
            print(f"  - {error}")
        print("\nPlease fix these issues before running posetring.\n")
        return False

    return True


if __name__ == "__main__":
    """Test configuration when run directly"""
    print("🔧 Configuration Test")
    print("=" * 50)
    print(f"Default field: {DEFAULT_FIELD}")
    print(f"Pivoting: {PIVOTING} (dense below {DENSE_CUTOFF})")
    print(f"Straighten budget: {STRAIGHTEN_STEP_BUDGET:,} steps")
    print(f"Oracle seed: {ORACLE_SEED}")
    print("=" * 50)

    if validate_config():
        print("✅ Configuration is valid!")
    else:
        print("❌ Configuration has errors!")
