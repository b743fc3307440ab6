"""Reference vectors were produced with Rust ``rand_xoshiro`` (SplitMix64,
Xoshiro256StarStar::seed_from_u64) so ports can reproduce the streams."""

import numpy as np
import pytest

from cvrsp.rng import MASK64, SplitMix64, Xoshiro256StarStar, run_stream, stream_seed
from cvrsp.transcript import select_outcome


def test_splitmix64_reference():
    sm = SplitMix64(0)
    assert [sm.next_u64() for _ in range(5)] == [
        16294208416658607535, 7960286522194355700, 487617019471545679,
        17909611376780542444, 1961750202426094747,
    ]


def test_xoshiro_raw_state_reference():
    x = Xoshiro256StarStar([1, 2, 3, 4])
    assert [x.next_u64() for _ in range(6)] == [
        11520, 0, 1509978240, 1215971899390074240, 1216172134540287360, 607988272756665600,
    ]


def test_xoshiro_seed_from_u64_reference():
    x = Xoshiro256StarStar.from_seed(42)
    assert [x.next_u64() for _ in range(5)] == [
        1546998764402558742, 6990951692964543102, 12544586762248559009,
        17057574109182124193, 18295552978065317476,
    ]


def test_random_is_top_53_bits():
    a, b = Xoshiro256StarStar.from_seed(9), Xoshiro256StarStar.from_seed(9)
    for _ in range(100):
        u = a.random()
        assert 0 <= u < 1
        assert u == (b.next_u64() >> 11) * 2.0 ** -53


def test_streams_are_independent_and_reproducible():
    assert stream_seed(5, 0) != stream_seed(5, 1)
    assert all(0 <= stream_seed(2 ** 64 - 1, i) <= MASK64 for i in range(5))
    seq = [run_stream(5, i).random() for i in range(50)]
    assert seq == [run_stream(5, i).random() for i in range(50)]
    assert len(set(seq)) == 50


def test_uniformity_rough():
    vals = np.array([run_stream(123, i).random() for i in range(20000)])
    hist, _ = np.histogram(vals, bins=10, range=(0, 1))
    # 5 sigma on each bin of a multinomial with p = 0.1
    sigma = np.sqrt(20000 * 0.1 * 0.9)
    assert np.all(np.abs(hist - 2000) < 5 * sigma)


class Fixed:
    def __init__(self, u):
        self.u = u

    def random(self):
        return self.u


def test_select_outcome_inverse_cdf_and_ties():
    probs = [0.25, 0.25, 0.5]
    assert select_outcome(probs, Fixed(0.0)) == 0
    assert select_outcome(probs, Fixed(0.2499)) == 0
    # boundary value goes to the next bin; never into a zero-probability bin
    assert select_outcome(probs, Fixed(0.25)) == 1
    assert select_outcome([0.5, 0.0, 0.5], Fixed(0.5)) == 2
    assert select_outcome(probs, Fixed(0.9999999999)) == 2


def test_select_outcome_forced():
    assert select_outcome([0.5, 0.5], 1) == 1
    with pytest.raises(ValueError):
        select_outcome([0.5, 0.5], 2)
    with pytest.raises(ValueError):
        select_outcome([0.5, 0.5], -1)


def test_select_outcome_accepts_numpy_generator():
    rng = np.random.default_rng(0)
    counts = np.bincount([select_outcome([0.2, 0.8], rng) for _ in range(5000)], minlength=2)
    assert abs(counts[1] / 5000 - 0.8) < 5 * np.sqrt(0.16 / 5000)
