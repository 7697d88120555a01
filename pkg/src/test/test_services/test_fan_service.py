from src.app.schemas.fan import FanRequest
from src.app.services.fan_service import build_fan, process_fan, resolve_class


def test_resolve_identity_class():
    resolved = resolve_class(37, "2")
    assert resolved.label == (0,)
    assert resolved.kernel_size >= 1
    assert resolved.pair.ideal.coprime_to(2)


def test_resolve_reduces_labels():
    assert resolve_class(37, "2", [4]).label == (1,)


def test_representative_avoids_p():
    resolved = resolve_class(89, "P5", [1], p=11)
    assert resolved.pair.ideal.coprime_to(11)


def test_fan_of_each_class_has_points():
    for label in ([0], [1], [2]):
        fan = build_fan(resolve_class(37, "2", label))
        assert fan.point_count > 0
        assert len(fan.points) == len(fan.cones)


def test_process_fan():
    response = process_fan(FanRequest(d=321, f="P2"))
    assert response.point_count == sum(c.points for c in response.cones)
    assert response.rho[0] != response.rho[-1]
