import pytest
from pathlib import Path
import sys

from hypothesis import given, settings, strategies as st

# Add src to path for imports
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from attacks.residues import delta_residue, detect_condition
from protocol.nonce import NonceSource
from protocol.sasi import (
    AuthenticationError,
    PartyState,
    TagIdentity,
    Transcript,
    reader_challenge,
    reader_verify_and_update,
    run_session,
    tag_process,
)
from protocol.word96 import MASK, RotationVariant

words = st.integers(min_value=0, max_value=MASK)
degenerate_keys = st.integers(min_value=0, max_value=MASK // 96).map(lambda j: j * 96)


class TestWorkedExample:
    def setup_method(self):
        """Set up the small-number session used throughout"""
        self.tag = TagIdentity(4)
        self.state = PartyState(ids=3, k1=96, k2=192)
        self.n1 = 1
        self.n2 = 2

    def test_reader_messages(self):
        """Test A, B, C and the updated keys"""
        a, b, c, secrets = reader_challenge(
            self.state, self.tag, self.n1, self.n2, RotationVariant.MODULAR
        )
        assert (a, b, c) == (98, 197, 323)
        assert secrets.k1bar == 98
        assert secrets.k2bar == 193

    def test_tag_answer_and_update(self):
        """Test D and the next pseudonym computed by the tag"""
        d, new_state = tag_process(
            self.state, self.tag, 98, 197, 323, RotationVariant.MODULAR
        )
        assert d == 39
        assert new_state == PartyState(ids=103, k1=98, k2=193)

    def test_reader_agrees_with_tag(self):
        """Test both parties land in the same state"""
        a, b, c, secrets = reader_challenge(
            self.state, self.tag, self.n1, self.n2, RotationVariant.MODULAR
        )
        d, tag_state = tag_process(
            self.state, self.tag, a, b, c, RotationVariant.MODULAR
        )
        reader_state = reader_verify_and_update(
            self.state, self.tag, secrets, d, RotationVariant.MODULAR
        )
        assert reader_state == tag_state

    def test_hamming_rotation(self):
        """Test the Hamming variant rotates K1 xor n2 by wt(K1) = 2"""
        *_, secrets = reader_challenge(
            self.state, self.tag, self.n1, self.n2, RotationVariant.HAMMING
        )
        assert secrets.k1bar == 392

    def test_detect_on_worked_transcript(self):
        """Test the residue condition fails mod 96 and holds mod 32"""
        transcript = Transcript(3, 98, 197, 323, 39, 103)
        assert not detect_condition(transcript, 96)
        assert detect_condition(transcript, 32)


class TestWordWraparound:
    def setup_method(self):
        """Set up a session whose sums overflow 96 bits"""
        self.tag = TagIdentity(1)
        self.state = PartyState(ids=MASK, k1=0, k2=0)

    def test_messages_wrap_at_96_bits(self):
        """Test B and the next pseudonym wrap to zero, C and D stay small"""
        a, b, c, secrets = reader_challenge(
            self.state, self.tag, 0, 1, RotationVariant.MODULAR
        )
        assert (a, b, c) == (MASK, 0, 1)
        assert (secrets.k1bar, secrets.k2bar) == (1, 0)

        d, new_state = tag_process(
            self.state, self.tag, a, b, c, RotationVariant.MODULAR
        )
        assert d == 0
        assert new_state == PartyState(ids=0, k1=1, k2=0)

    def test_delta_across_the_wrap(self):
        """Test 0 - (2^96 - 1) reduces exactly, not through the wrapped word"""
        transcript = Transcript(MASK, MASK, 0, 1, 0, 0)
        # 1 - 2^96 and 2^96 = 64 (mod 96)
        assert delta_residue(transcript, 96) == 33
        assert delta_residue(transcript, 32) == 1


class TestRejection:
    def setup_method(self):
        """Set up a random tag and one honest challenge"""
        src = NonceSource(99)
        self.tag = TagIdentity(src.next_word())
        self.state = PartyState(src.next_word(), src.next_word(), src.next_word())
        self.n1 = src.next_word()
        self.n2 = src.next_word()
        self.variant = RotationVariant.MODULAR

    @pytest.mark.parametrize("bit", [0, 1, 31, 64, 95])
    def test_tag_rejects_flipped_c(self, bit):
        """Test a single flipped bit of C is refused by the tag"""
        a, b, c, _ = reader_challenge(
            self.state, self.tag, self.n1, self.n2, self.variant
        )
        with pytest.raises(AuthenticationError) as info:
            tag_process(self.state, self.tag, a, b, c ^ (1 << bit), self.variant)
        assert info.value.party == "tag"
        assert info.value.message == "C"

    @pytest.mark.parametrize("bit", [0, 7, 48, 95])
    def test_reader_rejects_flipped_d(self, bit):
        """Test a single flipped bit of D is refused by the reader"""
        a, b, c, secrets = reader_challenge(
            self.state, self.tag, self.n1, self.n2, self.variant
        )
        d, _ = tag_process(self.state, self.tag, a, b, c, self.variant)
        with pytest.raises(AuthenticationError) as info:
            reader_verify_and_update(
                self.state, self.tag, secrets, d ^ (1 << bit), self.variant
            )
        assert info.value.party == "reader"


class TestCompleteness:
    @pytest.mark.parametrize("variant", list(RotationVariant))
    def test_honest_chain_never_desynchronises(self, variant):
        """Test 10^4 consecutive honest sessions all succeed"""
        src = NonceSource(5)
        tag = TagIdentity(src.next_word())
        reader = tag_state = PartyState(
            src.next_word(), src.next_word(), src.next_word()
        )
        for _ in range(10_000):
            result = run_session(reader, tag_state, tag, src, variant)
            assert result.reader == result.tag
            reader, tag_state = result.reader, result.tag

    def test_variants_diverge(self):
        """Test the two rotation rules give different transcripts"""
        state = PartyState(0x1234, 0x5555_0001, 0xF0F0_0003)
        tag = TagIdentity(0xABCDEF)
        modular = reader_challenge(state, tag, 11, 22, RotationVariant.MODULAR)
        hamming = reader_challenge(state, tag, 11, 22, RotationVariant.HAMMING)
        assert modular.c != hamming.c


class TestDegenerateSessions:
    def test_identities_under_zero_rotation(self):
        """Test keys that are multiples of 96 turn Rot into the identity"""
        src = NonceSource(31)
        tag = TagIdentity(src.next_word())
        for _ in range(10_000):
            state = PartyState(
                src.next_word(), src.next_multiple(96), src.next_multiple(96)
            )
            n1, n2 = src.next_word(), src.next_word()
            a, b, c, secrets = reader_challenge(
                state, tag, n1, n2, RotationVariant.MODULAR
            )
            assert secrets.k1bar == state.k1 ^ n2
            assert secrets.k2bar == state.k2 ^ n1
            assert c == ((state.k1 ^ state.k2 ^ n1) + (state.k2 ^ state.k1 ^ n2)) & MASK
            _, new_state = tag_process(state, tag, a, b, c, RotationVariant.MODULAR)
            assert new_state.ids == ((state.ids + tag.id) & MASK) ^ state.k1

    @settings(max_examples=200)
    @given(
        ids=words,
        tag_id=words,
        n1=words,
        n2=words,
        k1=degenerate_keys,
        k2=degenerate_keys,
        m=st.integers(min_value=1, max_value=95),
        noise=st.lists(words, min_size=4, max_size=4),
    )
    def test_low_bits_ignore_high_inputs(self, ids, tag_id, n1, n2, k1, k2, m, noise):
        """Low m output bits depend only on the low m bits of the inputs"""
        high = MASK ^ ((1 << m) - 1)
        low = (1 << m) - 1

        def outputs(ids, tag_id, n1, n2):
            state = PartyState(ids, k1, k2)
            tag = TagIdentity(tag_id)
            a, b, c, _ = reader_challenge(state, tag, n1, n2, RotationVariant.MODULAR)
            d, new_state = tag_process(state, tag, a, b, c, RotationVariant.MODULAR)
            return a, b, c, d, new_state.ids

        inputs = (ids, tag_id, n1, n2)
        perturbed = tuple(x ^ (e & high) for x, e in zip(inputs, noise))
        for x, y in zip(outputs(*inputs), outputs(*perturbed)):
            assert x & low == y & low


if __name__ == "__main__":
    pytest.main([__file__])
