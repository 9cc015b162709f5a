from rest_framework import serializers

from common.serializers import CsvRowSerializer, UnboundedFloatField


class BlockingRowSerializer(CsvRowSerializer):
    g1 = UnboundedFloatField()
    g2 = UnboundedFloatField()
    model = serializers.CharField()
    task = serializers.IntegerField()
    blocking = UnboundedFloatField()
    blocking_se = UnboundedFloatField(allow_null=True)
    det_le_geo = serializers.BooleanField(allow_null=True)


class SweepRowSerializer(CsvRowSerializer):
    eta1 = UnboundedFloatField()
    source = serializers.CharField()
    aoa1 = UnboundedFloatField()
    aoa2 = UnboundedFloatField()
    coma = UnboundedFloatField()
    aoi = UnboundedFloatField()
    aoa1_se = UnboundedFloatField(allow_null=True)
    aoa2_se = UnboundedFloatField(allow_null=True)
    coma_se = UnboundedFloatField(allow_null=True)
    aoi_se = UnboundedFloatField(allow_null=True)
