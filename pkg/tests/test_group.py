import numpy as np
import pytest

from quarticflex._geometry import FlexRecord, ProjPoint, find_flexes
from quarticflex._group import (
    GroupAction,
    MixedWeightOrbit,
    NonInvariantCurve,
    NotAGroup,
    Transform,
    apply,
    fixed_locus,
    is_invariant,
    klein_four,
    orbit,
    orbit_decomposition,
    orbit_shape,
    shape_of,
    stabilizer,
)
from quarticflex._poly import MPoly

x, y, z = (MPoly.variable(axis) for axis in "xyz")


def kuribayashi(a, b, c):
    return x**4 + y**4 + z**4 + a * x**2 * y**2 + b * x**2 * z**2 + c * y**2 * z**2


@pytest.fixture
def H():
    return klein_four()


class Test_Transform:
    def test_composition(self):
        sigma = Transform.diagonal(-1, 1, 1, name="σ")
        tau = Transform.diagonal(1, -1, 1, name="τ")
        assert (sigma @ tau).name == "στ"
        assert sigma @ tau == tau @ sigma
        assert (sigma @ sigma).is_identity()
        assert sigma.inverse() == sigma

    def test_scale_invariant(self):
        assert Transform(np.diag([2, -2, 2])) == Transform.diagonal(-1, 1, -1)

    def test_singular(self):
        with pytest.raises(ValueError, match="not invertible"):
            Transform(np.diag([1, 1, 0]))

    def test_apply(self):
        rotation = Transform(np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))
        assert apply(rotation, (1, 2, 3)) == ProjPoint((2, 1, 3))
        assert rotation((1, 2, 3)) == ProjPoint((2, 1, 3))


class Test_GroupAction:
    def test_klein_four(self, H):
        assert H.order == 4
        assert [g.name for g in H] == ["id", "σ", "τ", "στ"]

    def test_generated_by_rotation(self):
        cycle = Transform(np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]]))
        G = GroupAction.generated_by(cycle)
        assert len(G) == 3

    def test_not_closed(self):
        sigma = Transform.diagonal(-1, 1, 1)
        tau = Transform.diagonal(1, -1, 1)
        with pytest.raises(NotAGroup, match="is not an element"):
            GroupAction((Transform.identity(), sigma, tau))

    def test_missing_identity(self):
        with pytest.raises(NotAGroup, match="no identity"):
            GroupAction((Transform.diagonal(-1, 1, 1),))

    def test_infinite(self):
        with pytest.raises(NotAGroup, match="exceeds 16 elements"):
            GroupAction.generated_by(Transform.diagonal(2, 1, 1), max_order=16)


class Test_orbit:
    # fmt: off
    @pytest.mark.parametrize(
        ("point", "size"),
        [
            ((0.3, 0.5, 1),    4),
            ((0, 0.5, 1),      2),
            ((0.5, 0, 1),      2),
            ((0.5, 1, 0),      2),
            ((0, 0, 1),        1),
        ],
    )
    # fmt: on
    def test_orbit_stabilizer(self, H, point, size):
        current = orbit(H, point)
        assert current.size == size
        assert current.size * len(stabilizer(H, point)) == H.order
        assert current.stabilizer_order == H.order // size
        assert ProjPoint(point) in current
        assert current.representative == ProjPoint(point)


class Test_is_invariant:
    def test_family(self, H):
        assert is_invariant(kuribayashi(3, 3 + 1j, -0.5), H)

    def test_scaled_image(self):
        # x -> ix fixes x^4 but flips the sign of x^2*y^2
        G = GroupAction.generated_by(Transform.diagonal(1j, 1, 1))
        assert is_invariant(x**4 + y**4 + z**4, G)
        assert not is_invariant(kuribayashi(3, 0, 0), G)


class Test_fixed_locus:
    def test_generic_curve(self, H):
        orbits = fixed_locus(H, kuribayashi(3, 3 + 1j, -0.5))
        assert len(orbits) == 6
        assert [o.size for o in orbits] == [2] * 6
        F = kuribayashi(3, 3 + 1j, -0.5)
        for o in orbits:
            for p in o.points:
                assert abs(F(p.to_numpy())) < 1e-10 * F.scale
                assert sum(p.is_on_axis_line(axis) for axis in "xyz") == 1

    def test_slice_roots(self, H):
        # On x = 0 the points are [0:y:1] with y^4 + c*y^2 + 1 = 0
        c = -0.5
        orbits = fixed_locus(H, kuribayashi(3, 3 + 1j, c))
        on_x0 = [p for o in orbits for p in o.points if p.is_on_axis_line("x")]
        assert len(on_x0) == 4
        for p in on_x0:
            t = p[1] / p[2]
            assert abs(t**4 + c * t**2 + 1) < 1e-9

    def test_not_invariant(self, H):
        with pytest.raises(NonInvariantCurve):
            fixed_locus(H, x**3 * y + y**4 + z**4)


class Test_orbit_decomposition:
    def test_fermat(self, H):
        flexes = find_flexes(kuribayashi(0, 0, 0))
        decomposition = orbit_decomposition(H, flexes)
        assert [fo.orbit.size for fo in decomposition] == [2] * 6
        assert {fo.contact_order for fo in decomposition} == {4}
        assert orbit_shape(decomposition) == ("", "6_2", "6_2")

    def test_ordinary_orbits(self, H):
        flexes = find_flexes(kuribayashi(3, 3, 0))
        decomposition = orbit_decomposition(H, flexes)
        assert sum(fo.orbit.size for fo in decomposition) == 24
        assert orbit_shape(decomposition, empty="—") == ("6_4", "—", "6_4")

    def test_mixed_weights(self, H):
        point = ProjPoint((0.3, 0.5, 1))
        images = orbit(H, point).points
        flexes = [FlexRecord.from_contact_order(p, 3) for p in images[:-1]]
        flexes.append(FlexRecord.from_contact_order(images[-1], 4))
        with pytest.raises(MixedWeightOrbit, match="contact orders"):
            orbit_decomposition(H, flexes)

    def test_missing_image(self, H):
        point = ProjPoint((0.3, 0.5, 1))
        flexes = [FlexRecord.from_contact_order(point, 3)]
        with pytest.raises(MixedWeightOrbit, match="is not a flex"):
            orbit_decomposition(H, flexes)


def test_shape_of(H):
    orbits = [orbit(H, (0, 2, 1)), orbit(H, (0.2, 0.5, 1)), orbit(H, (2, 0, 1))]
    assert shape_of(orbits) == "2_2, 1_4"
    assert shape_of([]) == ""
