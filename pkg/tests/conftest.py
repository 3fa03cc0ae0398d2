import pytest

from paracosym.catalog import catalog
from paracosym.structures import AlmostParacontactStructure, StructureAnalysis


@pytest.fixture(scope="session")
def entries():
    return {e.name: e for e in catalog()}


@pytest.fixture(scope="session")
def analyses(entries):
    cache = {}

    def get(name: str) -> StructureAnalysis:
        if name not in cache:
            defn = entries[name].definition()
            cache[name] = StructureAnalysis(
                AlmostParacontactStructure.from_definition(defn)
            )
        return cache[name]

    return get
