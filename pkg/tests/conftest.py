import math
from fractions import Fraction

import pytest

from mrtlb.params import Discretization, PDEParams, solve_model

# Published anisotropic parameter sets (no source).  Keys: eps~, omega~, branch.
TABLE1 = {
    (0.40, 0.10): dict(
        omega_tilde=1 / 36, branch=(0, 1),
        omega=(0.003792962534682, 11 / 45), omega0=0.392414074930637,
        s=(0.258403002308493, 1.5), s_cross=(1.466835061000191,)),
    (0.20, 0.20): dict(
        omega_tilde=1 / 36, branch=(0, 0),
        omega=(0.105701855772165, 0.105701855772165), omega0=0.466081465800228,
        s=(0.892756279989137, 0.892756279989137), s_cross=(1.011385583524664,)),
    (0.10, 0.30): dict(
        omega_tilde=1 / 36, branch=(1, 0),
        omega=(11 / 45, 0.060417868131240), omega0=0.279164263737521,
        s=(1.5, 0.557600159447285), s_cross=(1.192683097984767,)),
    (0.10, 0.40, 0.15): dict(
        omega_tilde=1 / 180, branch=(0, 0, 1),
        omega=(1 / 9, 0.037126295868015, 0.296273981588552), omega0=0.044310556197977,
        s=(8 / 7, 0.258403002308493, 1.359653295886320),
        s_cross=(0.945790034643835, 1.151202850452001, 0.770241927190338)),
    (0.15, 0.20, 0.10, 0.05): dict(
        omega_tilde=1 / 360, branch=(0, 0, 0, 0),
        omega=(0.148170462855893, 0.144590744661054, 0.116666666666667, 0.055684824472697),
        omega0=0.003107936020711,
        s=(1.047126365130629, 0.892756279989137, 1.142857142857143, 1.182682621447616),
        s_cross=(0.299130236472667, 0.485974551112802, 0.696896856214742, 0.408239754101923,
                 0.625878745350766, 0.812554973056151)),
}

# Published parameter sets with the linear source eta = -pi^2, dt = 1/400.
TABLE2 = {
    (0.25, 0.10): dict(
        branch=(0, 1), omega=(0.085879807966778, 11 / 45), omega0=0.228240384066444,
        s=(0.729269281934827, 1.487864247860460), s_cross=(1.114757496216724,)),
    (0.40, 0.40): dict(
        branch=(0, 0), omega=(0.003792962534682, 0.003792962534682), omega0=0.873717038750163,
        s=(0.314095759114162, 0.314095759114162), s_cross=(1.770421857439279,)),
    (0.15, 0.40): dict(
        branch=(0, 0), omega=(0.109281573967004, 0.003792962534682), omega0=0.662739815885518,
        s=(1.045990365920910, 0.275195555816491), s_cross=(1.468455215964528,)),
}

TABLE2_DT = 1 / 400
TABLE2_DX = 1 / 80
ETA_SINE = -math.pi ** 2

ISOTROPIC_EXACT = {
    Fraction(1, 10): (Fraction(32, 45), Fraction(2, 45), Fraction(12, 11), Fraction(15, 13)),
    Fraction(1, 5): (Fraction(14, 45), Fraction(13, 90), Fraction(18, 19), Fraction(90, 101)),
}


def table1_model(eps, branch=None):
    row = TABLE1[eps]
    disc = Discretization(1 / 100, 1 / 40)
    pde = PDEParams.from_eps_tilde(eps, disc)
    return solve_model(pde, disc, omega_tilde=row["omega_tilde"], s2_axis=1.0,
                       branch=row["branch"] if branch is None else branch)


def table2_model(eps, branch=None):
    row = TABLE2[eps]
    disc = Discretization(TABLE2_DX, TABLE2_DT)
    pde = PDEParams.from_eps_tilde(eps, disc, eta=ETA_SINE)
    return solve_model(pde, disc, omega_tilde=1 / 36, s2_axis=1.0,
                       branch=row["branch"] if branch is None else branch)


@pytest.fixture
def d2q9_model():
    return table1_model((0.40, 0.10))


@pytest.fixture
def source_model():
    return table2_model((0.25, 0.10))


# --- acceptance reporting ----------------------------------------------------------------

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
