#!/usr/bin/env python3
"""Bootstrap a checkout: .env from the template, pinned requirements, a smoke check."""

import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent
MIN_PYTHON = (3, 8)
STACK = ("numpy", "scipy", "networkx", "pydantic", "dotenv")


def python_ok() -> bool:
    if sys.version_info[:2] >= MIN_PYTHON:
        return True
    found = ".".join(str(part) for part in sys.version_info[:2])
    print(f"hyperdual needs Python {MIN_PYTHON[0]}.{MIN_PYTHON[1]}+, found {found}")
    return False


def copy_env_template() -> None:
    env, template = ROOT / ".env", ROOT / ".env.example"
    if env.exists():
        print(".env already present, left as is")
    elif template.exists():
        shutil.copy(template, env)
        print("Wrote .env from .env.example (size caps, log level, default seed)")


def install_requirements() -> bool:
    requirements = ROOT / "requirements.txt"
    if not requirements.exists():
        print(f"Missing {requirements}")
        return False
    result = subprocess.run([sys.executable, "-m", "pip", "install", "-r", str(requirements)])
    if result.returncode != 0:
        print(f"pip exited with {result.returncode}; retry with: pip install -r {requirements.name}")
        return False
    return True


def stack_importable() -> bool:
    missing = []
    for module in STACK:
        try:
            __import__(module)
        except ImportError:
            missing.append(module)
    if missing:
        print(f"Still not importable: {', '.join(missing)}")
    return not missing


def main() -> int:
    print("Setting up hyperdual")
    if not python_ok():
        return 1
    copy_env_template()
    if not (install_requirements() and stack_importable()):
        return 1

    print("\nReady. Try:")
    print("  pytest")
    print("  python main.py -o mps.json zoo mps --sites 4 --phys 2 --bond 3 --seed 7")
    print("  python main.py contract mps.json")
    return 0


if __name__ == "__main__":
    sys.exit(main())
