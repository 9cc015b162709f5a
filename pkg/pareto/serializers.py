from rest_framework import serializers

from common.serializers import CsvRowSerializer, UnboundedFloatField


class DecisionPointSerializer(CsvRowSerializer):
    p_t1 = UnboundedFloatField()
    p_t2 = UnboundedFloatField()
    eta1 = UnboundedFloatField()
    eta2 = UnboundedFloatField()
    power_usage = UnboundedFloatField()
    feasible = serializers.BooleanField()
    coma = UnboundedFloatField()
    aoa1 = UnboundedFloatField()
    engine = serializers.CharField()


class FrontRowSerializer(CsvRowSerializer):
    """A front or baseline point, tagged with the set it belongs to."""

    role = serializers.CharField()
    p_t1 = UnboundedFloatField(source="point.p_t1")
    p_t2 = UnboundedFloatField(source="point.p_t2")
    eta1 = UnboundedFloatField(source="point.eta1")
    eta2 = UnboundedFloatField(source="point.eta2")
    power_usage = UnboundedFloatField(source="point.power_usage")
    coma = UnboundedFloatField(source="point.coma")
    aoa1 = UnboundedFloatField(source="point.aoa1")
    engine = serializers.CharField(source="point.engine")
