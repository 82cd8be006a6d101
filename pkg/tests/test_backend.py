import os
import subprocess
import sys

import predfix


def _probe(env_value: str | None) -> subprocess.CompletedProcess:
    env = dict(os.environ)
    if env_value is None:
        env.pop("PREDFIX_BACKEND", None)
    else:
        env["PREDFIX_BACKEND"] = env_value
    return subprocess.run(
        [sys.executable, "-c", "import predfix; print(predfix.BACKEND)"],
        capture_output=True,
        text=True,
        env=env,
    )


def test_backend_is_one_of_the_two():
    assert predfix.BACKEND in ("numba", "numpy")


def test_env_flag_forces_numpy():
    proc = _probe("numpy")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"


def test_env_flag_forces_numba():
    proc = _probe("numba")
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numba"


def test_default_is_auto():
    proc = _probe(None)
    assert proc.returncode == 0
    assert proc.stdout.strip() in ("numba", "numpy")


def test_unknown_backend_rejected():
    proc = _probe("fortran")
    assert proc.returncode != 0
    assert "PREDFIX_BACKEND" in proc.stderr
