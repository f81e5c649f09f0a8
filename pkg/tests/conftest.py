import random

import pytest
from hypothesis import strategies as st

from wordmaps.freegroup import Word, random_derived_word


def words(max_syllables=8, max_exp=3):
    syllable = st.tuples(st.integers(0, 1),
                         st.integers(-max_exp, max_exp).filter(bool))
    return st.lists(syllable, max_size=max_syllables).map(Word.from_syllables)


def derived_words(max_len=40):
    return st.integers(0, 2 ** 32).map(lambda s: random_derived_word(random.Random(s), max_len))


@pytest.fixture
def rng():
    return random.Random(20261018)
