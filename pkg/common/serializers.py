import math

from rest_framework import serializers


class UnboundedFloatField(serializers.FloatField):
    """Float that may be +inf (a starved class never executes)."""

    def to_representation(self, value):
        if value is None:
            return ""
        if isinstance(value, int) and not isinstance(value, bool):
            return str(value)
        value = float(value)
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return repr(value)


class CsvRowSerializer(serializers.Serializer):
    """Read-only serializer whose declared fields are the CSV columns."""

    @classmethod
    def header(cls):
        return list(cls().fields.keys())

    def create(self, validated_data):
        raise NotImplementedError("CSV rows are read-only")

    def update(self, instance, validated_data):
        raise NotImplementedError("CSV rows are read-only")


class IndexedFloatField(UnboundedFloatField):
    """Column ``index`` of a per-class tuple attribute."""

    def __init__(self, attr, index, **kwargs):
        kwargs.setdefault("read_only", True)
        super().__init__(**kwargs)
        self.attr = attr
        self.index = index

    def get_attribute(self, instance):
        return getattr(instance, self.attr)[self.index]
