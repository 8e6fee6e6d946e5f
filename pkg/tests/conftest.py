import random

import pytest
from hypothesis import strategies as st

from tracewords.words import Ensemble, Letter, Word


def balanced_letters(rng: random.Random, pairs: int, ensembles=tuple(Ensemble), max_index: int = 2) -> list[Letter]:
    """Random letters in admissible couples, shuffled."""
    out = []
    for _ in range(pairs):
        ens = rng.choice(ensembles)
        r = rng.randint(1, max_index)
        a = Letter(ens, r, rng.random() < 0.5, rng.random() < 0.5)
        if ens is Ensemble.GINIBRE_COMPLEX:
            b = Letter(ens, r, rng.random() < 0.5, not a.conjugated)
        else:
            b = Letter(ens, r, rng.random() < 0.5, rng.random() < 0.5)
        out += [a, b]
    rng.shuffle(out)
    return out


def split_faces(rng: random.Random, letters: list[Letter], max_faces: int = 3) -> list[Word]:
    m = len(letters)
    k = rng.randint(1, min(max_faces, m))
    cuts = sorted(rng.sample(range(1, m), k - 1))
    bounds = [0] + cuts + [m]
    return [Word(tuple(letters[a:b])) for a, b in zip(bounds[:-1], bounds[1:])]


def random_star_free(rng: random.Random, max_len: int, max_index: int = 3) -> Word:
    n = rng.randint(1, max_len)
    return Word(tuple(Letter(Ensemble.GINIBRE_COMPLEX, rng.randint(1, max_index)) for _ in range(n)))


@st.composite
def letters_strategy(draw, ensembles=tuple(Ensemble), max_index: int = 2):
    ens = draw(st.sampled_from(ensembles))
    return Letter(ens, draw(st.integers(1, max_index)), draw(st.booleans()), draw(st.booleans()))


@st.composite
def words_strategy(draw, max_len: int = 6, ensembles=tuple(Ensemble), max_index: int = 2):
    letters = draw(st.lists(letters_strategy(ensembles, max_index), min_size=1, max_size=max_len))
    return Word(tuple(letters))


@st.composite
def balanced_word_lists(draw, max_pairs: int = 4, ensembles=tuple(Ensemble), max_faces: int = 3):
    seed = draw(st.integers(0, 2**32 - 1))
    pairs = draw(st.integers(1, max_pairs))
    rng = random.Random(seed)
    return split_faces(rng, balanced_letters(rng, pairs, ensembles), max_faces)


@pytest.fixture
def rng():
    return random.Random(20240611)


def perfect_matchings(items):
    if not items:
        yield []
        return
    a = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for m in perfect_matchings(rest):
            yield [(a, items[i])] + m


def gg_configurations(m: int, max_faces: int = 2):
    """Every way to realize a matching of ``m`` edges with G_i / G_i* letters.

    Each pair gets its own index, so the pairing is the only admissible one.
    Yields ``(words, phi)`` for one face and for two faces of lengths
    ``a <= m - a``.
    """
    from tracewords.pairings import DecoratedPairing, EdgeId
    from tracewords.words import Ensemble, Letter, Word

    splits = [(m,)]
    if max_faces >= 2:
        splits += [(a, m - a) for a in range(1, m // 2 + 1)]
    for split in splits:
        ids = [EdgeId(0, p + 1) for p in range(split[0])]
        if len(split) == 2:
            ids += [EdgeId(1, p + 1) for p in range(split[1])]
        for matching in perfect_matchings(list(range(m))):
            for mask in range(2 ** len(matching)):
                letters = [None] * m
                for r, (x, y) in enumerate(matching):
                    flip = (mask >> r) & 1
                    letters[x] = Letter(Ensemble.GINIBRE_COMPLEX, r + 1, bool(flip), bool(flip))
                    letters[y] = Letter(Ensemble.GINIBRE_COMPLEX, r + 1, not flip, not flip)
                words = [Word(tuple(letters[:split[0]]))]
                if len(split) == 2:
                    words.append(Word(tuple(letters[split[0]:])))
                phi = DecoratedPairing(tuple((ids[x], ids[y]) for x, y in matching), (None,) * len(matching))
                yield words, phi


# criterion number -> list of (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(passed), detail))
    print(f"{'PASS' if passed else 'FAIL'} criterion {criterion}: {detail}", flush=True)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p for p, _ in parts)
        detail = "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
