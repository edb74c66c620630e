import pytest

from delaunaylab.utils.config import RunConfig, read_config


@pytest.fixture(autouse=True)
def clean_env(monkeypatch, tmp_path):
    monkeypatch.delenv('DELAUNAYLAB_OUTPUT_DIR', raising=False)
    monkeypatch.chdir(tmp_path)


def test_defaults():
    config = read_config()
    assert config == RunConfig()
    assert config.ode_tolerance == 1e-12
    assert config.n_modes == 64
    assert config.polish_modes == 128
    assert config.samples_per_period == 256
    assert config.seedless
    assert 'config_file' not in config.metadata()


def test_config_file(tmp_path):
    path = tmp_path / 'lab.yml'
    path.write_text('n_modes: 96\noutput_dir: results\nworkers: 3\n')
    config = read_config(str(path))
    assert config.n_modes == 96
    assert config.workers == 3
    assert config.output_path.name == 'results'
    assert config.config_file == str(path)


def test_default_location(tmp_path):
    (tmp_path / 'user_data').mkdir()
    (tmp_path / 'user_data' / 'config.yml').write_text('k_max: 8\n')
    assert read_config().k_max == 8


def test_precedence(tmp_path, monkeypatch):
    path = tmp_path / 'lab.yml'
    path.write_text('output_dir: from_file\n')
    monkeypatch.setenv('DELAUNAYLAB_OUTPUT_DIR', 'from_env')
    assert read_config(str(path)).output_dir == 'from_env'
    assert read_config(str(path), output_dir='from_flag').output_dir == 'from_flag'
    assert read_config(str(path), output_dir=None).output_dir == 'from_env'


@pytest.mark.parametrize('content', ['n_modes: 4\n', 'ode_tolerance: fast\n', 'colour: blue\n'])
def test_invalid_file(tmp_path, content):
    path = tmp_path / 'lab.yml'
    path.write_text(content)
    with pytest.raises(SystemExit) as info:
        read_config(str(path))
    assert info.value.code == 2


def test_missing_file(tmp_path):
    with pytest.raises(SystemExit):
        read_config(str(tmp_path / 'nope.yml'))


def test_inconsistent_values():
    with pytest.raises(ValueError):
        RunConfig(ode_tolerance=0.0)
    with pytest.raises(ValueError):
        RunConfig(n_coeffs=300)
    with pytest.raises(SystemExit):
        read_config(n_coeffs=300)
