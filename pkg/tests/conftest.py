import pytest

from signed_egonet.sentiment import LexiconScorer, ScorerConfig, load_lexicon
from signed_egonet.synth import SynthSpec, build_text_pools, generate_corpus


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def scorer(lexicon):
    return LexiconScorer(lexicon, ScorerConfig())


@pytest.fixture(scope="session")
def pools(scorer):
    return build_text_pools(scorer)


@pytest.fixture(scope="session")
def small_synth(pools):
    """Twelve egos with Poisson counts: about 30k records."""
    spec = SynthSpec(n_egos=12, seed=7)
    records, truth = generate_corpus(spec, pools)
    return spec, records, truth


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one summary line per acceptance criterion."""
    return request.config.stash.setdefault(ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
