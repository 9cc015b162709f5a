from rest_framework import serializers

from common.serializers import CsvRowSerializer, IndexedFloatField, UnboundedFloatField


class MetricsReportSerializer(CsvRowSerializer):
    engine = serializers.CharField()
    uplink1 = IndexedFloatField("uplink", 0)
    uplink2 = IndexedFloatField("uplink", 1)
    availability1 = IndexedFloatField("availability", 0)
    availability2 = IndexedFloatField("availability", 1)
    aoa1 = IndexedFloatField("aoa", 0)
    aoa2 = IndexedFloatField("aoa", 1)
    coma = UnboundedFloatField()
    aoi = UnboundedFloatField()
