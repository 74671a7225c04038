# Retrieval defaults
class RetrievalConfig:
    DEFAULT_K = 8
    DEFAULT_TAU = 0.3


# Brute-force oracle
class OracleConfig:
    MAX_ENTRIES = 10_000
