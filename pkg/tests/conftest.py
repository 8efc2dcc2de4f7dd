import pytest

from abcbribery import make_election


@pytest.fixture
def e0():
    """Four candidates, nine voters; AV scores 7, 5, 4, 1."""
    return make_election(
        "a b c p".split(),
        [
            ("v1", ["a", "b", "c"]),
            ("v2", ["b", "c"]),
            ("v3", ["a"]),
            ("v4", ["a", "b"]),
            ("v5", ["a", "b"]),
            ("v6", ["a", "c"]),
            ("v7", ["b", "c", "p"]),
            ("v8", ["a"]),
            ("v9", ["a"]),
        ],
    )


E0_TEXT = """\
candidates: a b c p
k: 2
voter v1: a b c
voter v2: b c
voter v3: a
voter v4: a b
voter v5: a b
voter v6: a c
voter v7: b c p
voter v8: a
voter v9: a
"""


@pytest.fixture
def e0_text():
    return E0_TEXT
