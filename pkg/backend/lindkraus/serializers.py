import math

import numpy as np
from rest_framework import serializers

from .core import DensityMatrix, DimensionError, InvalidStateError, LindbladModel, ModelValidationError
from .microscopic import SPECTRAL_FORMS, SpectralFunction, rates_from_spectral

STATE_PRESETS = ("excited", "ground", "plus")


class ComplexMatrixField(serializers.Field):
    """
    Square complex matrix as nested lists of [re, im] pairs.
    """
    default_error_messages = {
        "invalid": "Expected a square matrix of [re, im] pairs.",
    }

    def to_internal_value(self, data):
        try:
            arr = np.array(data, dtype=np.float64)
        except (TypeError, ValueError):
            self.fail("invalid")
        if arr.ndim != 3 or arr.shape[2] != 2 or arr.shape[0] != arr.shape[1]:
            self.fail("invalid")
        if not np.all(np.isfinite(arr)):
            self.fail("invalid")
        return arr[..., 0] + 1j * arr[..., 1]

    def to_representation(self, value):
        mat = np.asarray(value)
        return [[[float(z.real), float(z.imag)] for z in row] for row in mat]


class SpectralChannelSerializer(serializers.Serializer):
    """
    One coupled level pair and its spectral function.
    """
    pair = serializers.ListField(child=serializers.IntegerField(min_value=0), min_length=2, max_length=2)
    form = serializers.ChoiceField(choices=SPECTRAL_FORMS)
    g = serializers.FloatField(min_value=0.0)
    omega_c = serializers.FloatField(min_value=0.0, required=False, allow_null=True)


class SpectralSerializer(serializers.Serializer):
    """
    Reservoir description; a null or missing beta means zero temperature.
    """
    beta = serializers.FloatField(min_value=0.0, required=False, allow_null=True)
    channels = SpectralChannelSerializer(many=True, allow_empty=False)

    def validate_channels(self, value):
        seen = set()
        for channel in value:
            key = frozenset(channel["pair"])
            if key in seen:
                raise serializers.ValidationError(f"Pair {channel['pair']} is listed more than once.")
            seen.add(key)
        return value


class LindbladModelSerializer(serializers.Serializer):
    """
    Serializer for the JSON model schema.

    Expected JSON payload:
    {
        "energies": [float, ...],
        "rates": [[float, ...], ...],      # rates[m][n]: jump n -> m
        "dephasing_rate": float,           # optional, N = 2 only
        "spectral": {...}                  # optional, replaces "rates"
    }
    """
    energies = serializers.ListField(child=serializers.FloatField(), allow_empty=False)
    rates = serializers.ListField(child=serializers.ListField(child=serializers.FloatField()), required=False)
    dephasing_rate = serializers.FloatField(default=0.0)
    spectral = SpectralSerializer(required=False)

    def validate(self, attrs):
        has_rates = "rates" in attrs
        has_spectral = "spectral" in attrs
        if has_rates == has_spectral:
            raise serializers.ValidationError("Give exactly one of 'rates' or 'spectral'.")

        energies = attrs["energies"]
        if has_rates:
            rates = attrs["rates"]
            if len(rates) != len(energies) or any(len(row) != len(energies) for row in rates):
                raise serializers.ValidationError(
                    {"rates": f"Expected a {len(energies)}x{len(energies)} matrix."}
                )
        else:
            spectral = attrs["spectral"]
            beta = spectral.get("beta")
            beta = math.inf if beta is None else beta
            if beta == 0:
                raise serializers.ValidationError({"spectral": "beta must be positive or null."})
            try:
                channels = {
                    tuple(ch["pair"]): SpectralFunction.from_dict(ch) for ch in spectral["channels"]
                }
            except ValueError as exc:
                raise serializers.ValidationError({"spectral": str(exc)})
            try:
                rates = rates_from_spectral(energies, channels, beta)
            except ValueError as exc:
                raise ModelValidationError([str(exc)]) from exc

        try:
            attrs["model"] = LindbladModel(
                energies=energies, rates=rates, dephasing_rate=attrs.get("dephasing_rate", 0.0)
            )
        except DimensionError as exc:
            raise serializers.ValidationError(str(exc))
        return attrs

    def create(self, validated_data):
        return validated_data["model"]

    def to_representation(self, instance):
        return instance.to_dict()


class DensityMatrixField(ComplexMatrixField):
    """
    Density matrix as [re, im] pairs; invariant violations are validation errors.
    """

    def to_internal_value(self, data):
        mat = super().to_internal_value(data)
        try:
            return DensityMatrix(mat)
        except InvalidStateError as exc:
            raise serializers.ValidationError(str(exc))

    def to_representation(self, value):
        return super().to_representation(value.mat if isinstance(value, DensityMatrix) else value)


class TrajectoryPointSerializer(serializers.Serializer):
    """
    rho(t) with its diagnostics.
    """
    t = serializers.FloatField()
    rho = DensityMatrixField()
    trace_deviation = serializers.FloatField()
    min_eigenvalue = serializers.FloatField()
    purity = serializers.FloatField()


class KrausListingSerializer(serializers.Serializer):
    """
    Kraus operators at one time and their completeness residual.
    """
    t = serializers.FloatField()
    operators = serializers.ListField(child=ComplexMatrixField())
    completeness_residual = serializers.FloatField()


class EvolveRequestSerializer(serializers.Serializer):
    """
    Serializer for the evolve endpoint.
    """
    model = LindbladModelSerializer()
    rho0 = serializers.JSONField()
    times = serializers.ListField(child=serializers.FloatField(min_value=0.0), allow_empty=False)


class KrausRequestSerializer(serializers.Serializer):
    """
    Serializer for the kraus endpoint.
    """
    model = LindbladModelSerializer()
    time = serializers.FloatField(min_value=0.0)
