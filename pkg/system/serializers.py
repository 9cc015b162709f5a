from rest_framework import serializers

from common import error_codes


class TaskClassSerializer(serializers.Serializer):
    gen_prob = serializers.FloatField(min_value=0.0, max_value=1.0)
    admit_prob = serializers.FloatField(max_value=1.0)
    tx_power = serializers.FloatField()
    units_required = serializers.IntegerField(min_value=1)
    service_slots = serializers.IntegerField(min_value=1)
    downlink_delay = serializers.FloatField(min_value=0.0)
    penalty = serializers.FloatField(min_value=0.0)

    def validate_admit_prob(self, value):
        if value <= 0:
            raise serializers.ValidationError("Ensure this value is greater than 0.")
        return value

    def validate_tx_power(self, value):
        if value <= 0:
            raise serializers.ValidationError("Ensure this value is greater than 0.")
        return value


class ChannelSerializer(serializers.Serializer):
    shape = serializers.FloatField(min_value=0.5)
    pathloss_exp = serializers.FloatField()
    distance = serializers.FloatField()
    noise_power = serializers.FloatField()
    snr_threshold = serializers.FloatField()
    ideal = serializers.BooleanField(required=False, default=False)

    def validate(self, attrs):
        errors = {}
        for name in ("pathloss_exp", "distance", "noise_power", "snr_threshold"):
            if attrs[name] <= 0:
                errors[name] = ["Ensure this value is greater than 0."]
        if errors:
            raise serializers.ValidationError(errors)
        return attrs


class ComputeSerializer(serializers.Serializer):
    capacity = serializers.IntegerField(min_value=1)


class SystemConfigSerializer(serializers.Serializer):
    task1 = TaskClassSerializer()
    task2 = TaskClassSerializer()
    channel = ChannelSerializer()
    compute = ComputeSerializer()
    energy_rate = serializers.FloatField(min_value=0.0, allow_null=True, required=False)
    sim_slots = serializers.IntegerField(min_value=1)
    rng_seed = serializers.IntegerField(min_value=0)

    def validate(self, attrs):
        if attrs["task1"]["gen_prob"] + attrs["task2"]["gen_prob"] > 1.0:
            raise serializers.ValidationError(error_codes.GEN_PROB_SUM)
        return attrs


def flatten_errors(errors, prefix=""):
    """Turn nested serializer errors into ``"path: message"`` strings."""
    flat = []
    if isinstance(errors, dict):
        for key, value in errors.items():
            if key == "non_field_errors":
                path = prefix
            else:
                path = f"{prefix}.{key}" if prefix else key
            flat.extend(flatten_errors(value, path))
    elif isinstance(errors, (list, tuple)):
        for item in errors:
            flat.extend(flatten_errors(item, prefix))
    else:
        flat.append(f"{prefix}: {errors}" if prefix else str(errors))
    return flat
