from __future__ import annotations

import pytest

from modelvote.corpus import TermEntry


@pytest.fixture
def four_diseases() -> list[TermEntry]:
    return [
        TermEntry("B", "Babesiosis", ("babesia infection",)),
        TermEntry("GCA", "Giant Cell Arteritis", ("temporal arteritis",)),
        TermEntry("GVHD", "Graft Versus Host Disease", ("graft-versus-host disease",)),
        TermEntry("COP", "Cryptogenic Organizing Pneumonia", ()),
    ]
