from rest_framework import serializers

from common.serializers import CsvRowSerializer, IndexedFloatField, UnboundedFloatField


def _pair(attr):
    return IndexedFloatField(attr, 0), IndexedFloatField(attr, 1)


class SimResultSerializer(CsvRowSerializer):
    service_mode = serializers.CharField()
    departure_semantics = serializers.CharField()
    fading_draws = serializers.BooleanField()
    slot_convention = serializers.CharField()
    seed = serializers.IntegerField()
    slots = serializers.IntegerField()
    measured_slots = serializers.IntegerField()
    batches = serializers.IntegerField()
    aoa1, aoa2 = _pair("aoa")
    aoa1_se, aoa2_se = _pair("aoa_se")
    coma = UnboundedFloatField()
    coma_se = UnboundedFloatField()
    blocking1, blocking2 = _pair("blocking")
    blocking1_se, blocking2_se = _pair("blocking_se")
    aoi = UnboundedFloatField()
    aoi_se = UnboundedFloatField()
    uplink1, uplink2 = _pair("uplink_rate")
    uplink1_se, uplink2_se = _pair("uplink_se")
    generated1, generated2 = _pair("generated")
    rejected1, rejected2 = _pair("rejected")
    uplink_lost1, uplink_lost2 = _pair("uplink_lost")
    blocked1, blocked2 = _pair("blocked")
    executed1, executed2 = _pair("executed")
    in_flight1, in_flight2 = _pair("in_flight")
    interval_mean1, interval_mean2 = _pair("interval_mean")
    interval_sq_mean1, interval_sq_mean2 = _pair("interval_sq_mean")
