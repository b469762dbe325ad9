import pytest

from kexchange.config import Config
from kexchange.enums import ConsoleFormat
from kexchange.errors import InvalidConfiguration


def test_defaults(isolated_config):
    config = Config()
    assert config.config_file == isolated_config.resolve()
    assert config.format == ConsoleFormat.text
    assert config.epsilon == "1/2"
    assert config.check_invariants
    assert config.workers == 1
    assert not isolated_config.exists()


def test_set_and_get():
    config = Config()
    config.set("epsilon", "0.25")
    assert config.epsilon == "1/4"
    assert config.get("epsilon") == '"1/4"'
    config.set("format", "json")
    assert config.format == ConsoleFormat.json
    assert config.get("format") == '"json"'
    config.set("brute_cap", "12")
    assert config.brute_cap == 12


@pytest.mark.parametrize(
    "key, value",
    [
        ("unknown", "1"),
        ("epsilon", "2"),
        ("epsilon", "0"),
        ("workers", "0"),
        ("brute_cap", '"many"'),
        ("debug", "maybe"),
        ("format", "xml"),
        ("cap_candidates", "null"),
    ],
)
def test_set_rejects(key, value):
    with pytest.raises(InvalidConfiguration) as info:
        Config().set(key, value)
    assert info.value.operation == InvalidConfiguration.Op.set


def test_save_and_reload(isolated_config):
    config = Config()
    config.set("workers", "3")
    config.set("literal_pseudocode", "true")
    config.save()
    assert isolated_config.exists()

    reloaded = Config()
    assert reloaded.workers == 3
    assert reloaded.literal_pseudocode
    assert reloaded.epsilon == "1/2"


def test_explicit_path_wins(tmp_path):
    path = tmp_path / "other.ini"
    path.write_text("[search]\nepsilon = \"1/3\"\n")
    assert Config(path).epsilon == "1/3"
    assert Config().epsilon == "1/2"


def test_load_resets_first(isolated_config):
    config = Config()
    config.set("workers", "4")
    config.load()
    assert config.workers == 1


def test_broken_file(isolated_config):
    isolated_config.write_text("[search]\ncap_candidates = lots\n")
    with pytest.raises(InvalidConfiguration):
        Config()


def test_find_and_entries():
    config = Config()
    assert config.find("campaign", "workers") == "workers"
    with pytest.raises(ValueError):
        config.find("campaign", "threads")
    entries = config.entries
    assert set(entries) == {"general", "search", "exact", "campaign"}
    assert [e.key for e in entries["exact"]] == [
        "brute_cap",
        "certify_cap",
        "witness_cap",
    ]
