import numpy as np
import pytest

from concentra.discrete import concentration_ratio
from concentra.trigpoly import Spectrum


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def brute_force_gamma_sharp(q: int, p: float):
    """Independent unpruned enumeration of all 2^q spectra.

    Candidate location uses its own batched transform; the final value of
    each near-max candidate is recomputed with the standard witness
    evaluator (the same definitional path every reported ratio goes
    through), so the result is comparable bit-for-bit.
    """
    k = np.arange(q)
    E = np.exp(2j * np.pi * np.outer(k, k) / q)
    total = 1 << q
    best = -1.0
    cands = []
    for s in range(0, total, 1 << 16):
        masks = np.arange(s, min(s + (1 << 16), total), dtype=np.int64)
        bits = ((masks[:, None] >> k[None, :]) & 1).astype(np.float64)
        V = bits.astype(np.complex128) @ E
        m = np.abs(V)
        mp = m if p == 1.0 else m ** p
        denom = mp.sum(axis=1)
        with np.errstate(invalid="ignore", divide="ignore"):
            r = np.where(denom > 0.5, 2.0 * mp[:, 1] / denom, 0.0)
        b = float(r.max())
        thr = max(best, b) - 1e-9
        for i in np.nonzero(r >= thr)[0]:
            cands.append(int(masks[i]))
        best = max(best, b)
    top = -1.0
    witness = None
    for mask in cands:
        fr = tuple(i for i in range(q) if mask >> i & 1)
        if not fr:
            continue
        v = concentration_ratio(Spectrum(fr, q), p, 1)
        if v > top or (v == top and fr < witness):
            top, witness = v, fr
    return top, witness
