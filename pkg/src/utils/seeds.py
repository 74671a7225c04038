import hashlib
import json
from typing import Any, Mapping

SEED_BITS = 63


class SeedUtils:
    """Utility class for reproducible seeds and config fingerprints"""

    @staticmethod
    def derive_seed(*parts: Any) -> int:
        """Derive a child seed from its parents; stable across processes and platforms"""
        material = "/".join(str(part) for part in parts)
        digest = hashlib.sha256(material.encode()).digest()
        return int.from_bytes(digest[:8], "big") & ((1 << SEED_BITS) - 1)

    @staticmethod
    def canonical_json(payload: Mapping[str, Any]) -> str:
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @staticmethod
    def config_hash(payload: Mapping[str, Any]) -> str:
        """Hash a config for naming its run directory"""
        return hashlib.sha256(SeedUtils.canonical_json(payload).encode()).hexdigest()


derive_seed = SeedUtils.derive_seed
config_hash = SeedUtils.config_hash
