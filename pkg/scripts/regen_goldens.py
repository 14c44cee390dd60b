"""Rewrite every golden file under tests/golden from a clean build.

    python3 scripts/regen_goldens.py

Runs the golden-producing tests with SUPERDUAL_REGEN=1, then reruns them
without it to confirm the files reproduce bit-exactly.
"""
import os
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def main():
    cmd = [sys.executable, "-m", "pytest", "-q", str(ROOT / "tests"), "-k", "golden"]
    env = dict(os.environ, SUPERDUAL_REGEN="1")
    if subprocess.call(cmd, env=env, cwd=ROOT):
        return 1
    env.pop("SUPERDUAL_REGEN")
    return subprocess.call(cmd, env=env, cwd=ROOT)


if __name__ == "__main__":
    raise SystemExit(main())
