import pytest

from tweetpromo.cleanse import FixtureResolver
from tweetpromo.corpus import data_path, fixture_tweets, training_table
from tweetpromo.intent import IntentEngine
from tweetpromo.lexicon import load_lexicon

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def engine(lexicon):
    return IntentEngine(lexicon)


@pytest.fixture
def resolver():
    return FixtureResolver.from_file(data_path("resolver.tsv"))


@pytest.fixture(scope="session")
def training():
    return training_table()


@pytest.fixture(scope="session")
def tweets():
    return fixture_tweets()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
