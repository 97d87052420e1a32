"""64-bit FNV-1a, the one hash used for feature bucketing and palette
assignment. Kept dependency-free so outputs are stable across platforms
and interpreter versions."""
from __future__ import annotations

FNV64_OFFSET = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    """FNV-1a over bytes, 64-bit."""
    h = FNV64_OFFSET
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK
    return h


def fnv1a64_text(text: str) -> int:
    return fnv1a64(text.encode("utf-8"))
