from .fingerprint import canonical_json, stable_fingerprint

__all__ = ["canonical_json", "stable_fingerprint"]
