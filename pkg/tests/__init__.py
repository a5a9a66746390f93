"""Test package for qfiso; puts the checkout root first on sys.path so the
tests run against the working tree without an install."""
import sys
from pathlib import Path

ROOT_DIR = str(Path(__file__).resolve().parent.parent)

if ROOT_DIR not in sys.path:
    sys.path.insert(0, ROOT_DIR)
