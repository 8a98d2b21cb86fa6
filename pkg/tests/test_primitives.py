"""Group-law oracles, hash vectors, AE behaviour and byte utilities.

The tiny curve is small enough to check everything against independent
brute force: the point set by exhaustive enumeration, scalar multiplication
against iterated addition, and the group laws over all point combinations.
"""

import hashlib

import pytest
from hypothesis import given, settings, strategies as st

from wsnakep.primitives import (
    Ciphertext,
    DecryptionError,
    GroupPoint,
    INFINITY,
    PointValidationError,
    ae_open,
    ae_seal,
    decode_point,
    encode_point,
    enumerate_affine_points,
    frame,
    get_curve,
    hash_digest,
    is_on_curve,
    kdf_key,
    p2b,
    p256_curve,
    point_add,
    point_neg,
    scalar_mult,
    toy_curve,
    ts_bytes,
    ts_from_bytes,
    unframe,
    xor_bytes,
)

TOY = toy_curve()


# -- independent oracle for the tiny curve -----------------------------------

def oracle_points():
    """All curve points, from scratch with plain modular arithmetic."""
    pts = [None]
    for x in range(TOY.p):
        for y in range(TOY.p):
            if (y * y - (x ** 3 + TOY.a * x + TOY.b)) % TOY.p == 0:
                pts.append((x, y))
    return pts


def oracle_add(p1, p2):
    p = TOY.p
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    if p1[0] == p2[0] and (p1[1] + p2[1]) % p == 0:
        return None
    if p1 == p2:
        lam = (3 * p1[0] * p1[0] + TOY.a) * pow(2 * p1[1], -1, p) % p
    else:
        lam = (p2[1] - p1[1]) * pow(p2[0] - p1[0], -1, p) % p
    x3 = (lam * lam - p1[0] - p2[0]) % p
    return (x3, (lam * (p1[0] - x3) - p1[1]) % p)


def as_tuple(point):
    return None if point.is_infinity else (point.x, point.y)


def from_tuple(t):
    return INFINITY if t is None else GroupPoint(*t)


class TestToyCurveOracle:
    def test_enumerated_order_is_19(self):
        assert len(oracle_points()) == 19
        assert TOY.n == 19

    def test_enumeration_agrees_with_module_helper(self):
        ours = set(enumerate_affine_points(TOY.p, TOY.a, TOY.b))
        theirs = {p for p in oracle_points() if p is not None}
        assert ours == theirs

    def test_point_add_matches_oracle_exhaustively(self):
        pts = oracle_points()
        for p1 in pts:
            for p2 in pts:
                got = point_add(from_tuple(p1), from_tuple(p2), TOY)
                assert as_tuple(got) == oracle_add(p1, p2)

    def test_group_laws_exhaustive(self):
        pts = [from_tuple(t) for t in oracle_points()]
        for p1 in pts:
            for p2 in pts:
                assert point_add(p1, p2, TOY) == point_add(p2, p1, TOY)
        for p1 in pts:
            assert point_add(p1, INFINITY, TOY) == p1
            assert point_add(p1, point_neg(p1, TOY), TOY).is_infinity
        # associativity over all triples (19^3 additions)
        for p1 in pts:
            for p2 in pts:
                left = point_add(p1, p2, TOY)
                for p3 in pts:
                    assert point_add(left, p3, TOY) == point_add(
                        p1, point_add(p2, p3, TOY), TOY
                    )

    def test_scalar_mult_matches_iterated_addition_for_all_scalars(self):
        acc = None
        for k in range(TOY.n):
            assert as_tuple(scalar_mult(k, TOY.g, TOY)) == acc
            acc = oracle_add(acc, (TOY.gx, TOY.gy))

    def test_doubling_generator(self):
        assert as_tuple(scalar_mult(2, TOY.g, TOY)) == oracle_add((5, 1), (5, 1))
        assert as_tuple(scalar_mult(2, TOY.g, TOY)) == (6, 3)

    def test_order_annihilates(self):
        assert point_add(
            scalar_mult(TOY.n - 1, TOY.g, TOY), TOY.g, TOY
        ).is_infinity


class TestCurveValidation:
    def test_singular_curve_rejected(self):
        from wsnakep.primitives import CurveParams

        with pytest.raises(ValueError, match="singular"):
            CurveParams(name="bad", p=17, a=0, b=0, gx=5, gy=1, n=19)

    def test_generator_must_lie_on_curve(self):
        from wsnakep.primitives import CurveParams

        with pytest.raises(ValueError, match="not on the curve"):
            CurveParams(name="bad", p=17, a=2, b=2, gx=5, gy=2, n=19)

    def test_off_curve_inputs_rejected(self):
        bogus = GroupPoint(3, 3)
        assert not is_on_curve(bogus, TOY)
        with pytest.raises(PointValidationError):
            point_add(bogus, TOY.g, TOY)
        with pytest.raises(PointValidationError):
            scalar_mult(2, bogus, TOY)

    def test_scalar_range_enforced(self):
        with pytest.raises(ValueError):
            scalar_mult(TOY.n, TOY.g, TOY)
        with pytest.raises(ValueError):
            scalar_mult(-1, TOY.g, TOY)

    def test_zero_and_one_scalars(self):
        assert scalar_mult(0, TOY.g, TOY).is_infinity
        assert scalar_mult(1, TOY.g, TOY) == TOY.g

    def test_unknown_curve_name(self):
        with pytest.raises(ValueError, match="unknown curve"):
            get_curve("brainpool")


class TestEcdhAgreement:
    def test_toy_curve_thousand_random_pairs(self):
        import random

        rng = random.Random(0xECD4)
        for _ in range(1000):
            a = rng.randrange(1, TOY.n)
            s = rng.randrange(1, TOY.n)
            left = scalar_mult(a, scalar_mult(s, TOY.g, TOY), TOY)
            right = scalar_mult(s, scalar_mult(a, TOY.g, TOY), TOY)
            assert left == right

    def test_standard_curve_agreement(self):
        import random

        curve = p256_curve()
        rng = random.Random(0xECD5)
        for _ in range(5):
            a = rng.randrange(1, curve.n)
            s = rng.randrange(1, curve.n)
            assert scalar_mult(a, scalar_mult(s, curve.g, curve), curve) == \
                scalar_mult(s, scalar_mult(a, curve.g, curve), curve)


class TestHash:
    def test_known_vectors(self):
        # pinned from the reference implementation of the default algorithm
        assert hash_digest(b"").hex() == (
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        )
        assert hash_digest(b"a").hex() == (
            "ca978112ca1bbdcafac231b39a23dc4da786eff8147c4e72b9807785afee48bb"
        )

    def test_determinism_and_length(self):
        for data in (b"", b"x", b"y" * 1000):
            assert hash_digest(data) == hash_digest(data)
            assert len(hash_digest(data)) == 32

    def test_algorithm_registry(self):
        assert hash_digest(b"q", alg="sha3-256") == hashlib.sha3_256(b"q").digest()
        with pytest.raises(ValueError, match="unknown hash"):
            hash_digest(b"q", alg="md5")


class TestPointDigests:
    def test_p2b_pinned_vector(self):
        # oracle: hash(0x02 || x || y) computed independently
        expected = hashlib.sha256(b"\x02" + bytes([5]) + bytes([1])).digest()
        assert p2b(TOY.g, TOY) == expected
        assert p2b(TOY.g, TOY).hex() == (
            "ff9192ad3f2791ecea4bbd738e7488898dd01f12a5604ceb5bf3bba7be213b15"
        )

    def test_kdf_pinned_vector(self):
        expected = hashlib.sha256(b"\x01" + bytes([5]) + bytes([1])).digest()
        assert kdf_key(TOY.g, TOY) == expected
        assert kdf_key(TOY.g, TOY).hex() == (
            "cccf6121efa5d90e210d86739af2f778c4fe50194cd39e4994d16c51393c5b8d"
        )

    def test_domain_separation(self):
        for t in oracle_points():
            if t is None:
                continue
            point = GroupPoint(*t)
            assert p2b(point, TOY) != kdf_key(point, TOY)

    def test_infinity_has_no_encoding(self):
        with pytest.raises(PointValidationError):
            p2b(INFINITY, TOY)
        with pytest.raises(PointValidationError):
            kdf_key(INFINITY, TOY)

    def test_kdf_agrees_across_ecdh_routes(self):
        import random

        rng = random.Random(1)
        x = scalar_mult(7, TOY.g, TOY)  # gateway public key for s=7
        for _ in range(50):
            a = rng.randrange(1, TOY.n)
            e2_user = scalar_mult(a, x, TOY)
            e2_gw = scalar_mult(7, scalar_mult(a, TOY.g, TOY), TOY)
            assert kdf_key(e2_user, TOY) == kdf_key(e2_gw, TOY)


class TestPointCodec:
    def test_roundtrip_all_points(self):
        for t in oracle_points():
            point = from_tuple(t)
            assert decode_point(encode_point(point, TOY), TOY) == point

    def test_infinity_wire_tag(self):
        assert encode_point(INFINITY, TOY) == b"\x00"

    def test_bad_encodings_rejected(self):
        with pytest.raises(PointValidationError):
            decode_point(b"\x04\x05", TOY)  # truncated
        with pytest.raises(PointValidationError):
            decode_point(b"\x02\x05\x01", TOY)  # wrong tag
        with pytest.raises(PointValidationError):
            decode_point(b"\x04\x03\x03", TOY)  # off curve

    def test_p256_roundtrip(self):
        curve = p256_curve()
        q = scalar_mult(12345, curve.g, curve)
        assert decode_point(encode_point(q, curve), curve) == q
        assert len(encode_point(q, curve)) == 65


class TestAuthenticatedEncryption:
    KEY = bytes(range(32))
    KEY2 = bytes(range(1, 33))

    def test_roundtrip(self):
        ct = ae_seal(self.KEY, 0x01, b"payload")
        assert ae_open(self.KEY, ct) == b"payload"

    def test_wrong_key_fails(self):
        ct = ae_seal(self.KEY, 0x01, b"payload")
        with pytest.raises(DecryptionError):
            ae_open(self.KEY2, ct)

    def test_direction_tag_enforced(self):
        ct = ae_seal(self.KEY, 0x01, b"payload")
        with pytest.raises(DecryptionError):
            ae_open(self.KEY, ct, expected_tag=0x02)
        assert ae_open(self.KEY, ct, expected_tag=0x01) == b"payload"

    def test_every_single_bit_flip_rejected(self):
        ct = ae_seal(self.KEY, 0x01, b"short message")
        for i in range(len(ct.blob)):
            for bit in range(8):
                broken = bytearray(ct.blob)
                broken[i] ^= 1 << bit
                with pytest.raises(DecryptionError):
                    ae_open(self.KEY, Ciphertext(ct.nonce_tag, bytes(broken)))

    @given(st.binary(min_size=0, max_size=200), st.binary(min_size=32, max_size=32))
    @settings(max_examples=50)
    def test_roundtrip_random(self, plaintext, key):
        for tag in (0x01, 0x02):
            assert ae_open(key, ae_seal(key, tag, plaintext)) == plaintext

    def test_ciphertext_wire_roundtrip(self):
        ct = ae_seal(self.KEY, 0x02, b"x" * 40)
        assert Ciphertext.decode(ct.encode()) == ct

    def test_key_length_enforced(self):
        with pytest.raises(ValueError):
            ae_seal(b"short", 0x01, b"m")


class TestXor:
    @given(st.binary(min_size=32, max_size=32), st.binary(min_size=32, max_size=32),
           st.binary(min_size=32, max_size=32))
    @settings(max_examples=100)
    def test_abelian_group_of_exponent_two(self, a, b, c):
        zero = bytes(32)
        assert xor_bytes(a, a) == zero
        assert xor_bytes(a, zero) == a
        assert xor_bytes(a, b) == xor_bytes(b, a)
        assert xor_bytes(xor_bytes(a, b), c) == xor_bytes(a, xor_bytes(b, c))
        assert xor_bytes(xor_bytes(a, b), b) == a

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            xor_bytes(b"ab", b"abc")


class TestFraming:
    def test_known_encoding(self):
        assert frame(b"ab", b"c") == bytes.fromhex("00026162000163")

    @given(st.lists(st.binary(max_size=80), max_size=6))
    @settings(max_examples=100)
    def test_roundtrip(self, parts):
        assert unframe(frame(*parts)) == parts

    def test_splice_resistance(self):
        # same concatenation, different splits, distinct framings
        assert frame(b"ab", b"c") != frame(b"a", b"bc")
        assert frame(b"abc") != frame(b"ab", b"c")

    def test_truncation_rejected(self):
        data = frame(b"hello")
        with pytest.raises(ValueError):
            unframe(data[:-1])
        with pytest.raises(ValueError):
            unframe(data + b"\x07")

    def test_timestamp_roundtrip(self):
        for t in (0, 1, 2**40, 2**64 - 1):
            assert ts_from_bytes(ts_bytes(t)) == t
        with pytest.raises(ValueError):
            ts_bytes(-1)
        with pytest.raises(ValueError):
            ts_from_bytes(b"\x00" * 7)
