"""Shipped example files: the FOAF olog, instance, theory and proofs, and friends."""
import os

HERE = os.path.dirname(os.path.abspath(__file__))


def path(name: str) -> str:
    return os.path.join(HERE, name)


def read(name: str) -> str:
    with open(path(name), encoding="utf-8") as fh:
        return fh.read()
