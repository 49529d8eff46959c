"""Deterministic seed derivation.

Every stage and sub-component derives its seed from the single run seed plus
a stable string label, so independent pieces never share RNG streams and the
whole pipeline is a function of (config, seed).
"""

import hashlib


def derive_seed(root_seed: int, *labels) -> int:
    text = ":".join([str(int(root_seed))] + [str(x) for x in labels])
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") % (2**63 - 1)
