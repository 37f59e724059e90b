import logging

from rest_framework import status
from rest_framework.decorators import api_view
from rest_framework.response import Response

from .cli import parse_state
from .core import (
    LindKrausError,
    ModelValidationError,
    NonCompletelyPositiveError,
    NumericalError,
    SchemaError,
)
from .kraus_solver import solved_evolve, solved_kraus_set
from .serializers import (
    EvolveRequestSerializer,
    KrausListingSerializer,
    KrausRequestSerializer,
    TrajectoryPointSerializer,
)

logger = logging.getLogger(__name__)


def _error_response(exc):
    if isinstance(exc, SchemaError):
        return Response({"error": str(exc)}, status=status.HTTP_400_BAD_REQUEST)
    if isinstance(exc, ModelValidationError):
        return Response(
            {"error": "Model validation failed", "violations": exc.violations},
            status=status.HTTP_422_UNPROCESSABLE_ENTITY,
        )
    if isinstance(exc, (NonCompletelyPositiveError, NumericalError)):
        return Response({"error": str(exc)}, status=status.HTTP_422_UNPROCESSABLE_ENTITY)
    return Response({"error": str(exc)}, status=status.HTTP_400_BAD_REQUEST)


@api_view(['GET'])
def health_check(request):
    """
    Health check endpoint that returns the status of the API.
    """
    return Response({"status": "ok"}, status=status.HTTP_200_OK)


@api_view(['POST'])
def evolve(request):
    """
    Evolve an initial state under a Lindblad model.

    Expected JSON payload:
    {
        "model": {"energies": [...], "rates": [[...]], "dephasing_rate": 0.0},
        "rho0": [[[re, im], ...], ...] | "excited" | "ground" | "plus",
        "times": [float, ...]
    }
    """
    try:
        serializer = EvolveRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
        model = serializer.validated_data['model']['model']
        rho0 = parse_state(serializer.validated_data['rho0'], model.dim)

        trajectory = []
        for t in serializer.validated_data['times']:
            rho = solved_evolve(model, rho0, t)
            trajectory.append({
                "t": t,
                "rho": rho,
                "trace_deviation": rho.trace_deviation,
                "min_eigenvalue": rho.min_eigenvalue,
                "purity": rho.purity,
            })
    except LindKrausError as exc:
        logger.warning("evolve request rejected: %s", exc)
        return _error_response(exc)

    return Response({
        "model": model.to_dict(),
        "trajectory": TrajectoryPointSerializer(trajectory, many=True).data,
    }, status=status.HTTP_200_OK)


@api_view(['POST'])
def kraus(request):
    """
    Kraus operators of the solved map at one time.

    Expected JSON payload:
    {
        "model": {...},
        "time": float
    }
    """
    try:
        serializer = KrausRequestSerializer(data=request.data)
        if not serializer.is_valid():
            return Response(serializer.errors, status=status.HTTP_400_BAD_REQUEST)
        model = serializer.validated_data['model']['model']
        t = serializer.validated_data['time']
        kraus_ops = solved_kraus_set(model, t)
    except LindKrausError as exc:
        logger.warning("kraus request rejected: %s", exc)
        return _error_response(exc)

    listing = KrausListingSerializer({
        "t": t,
        "operators": list(kraus_ops.operators),
        "completeness_residual": kraus_ops.completeness_residual(),
    })
    return Response(listing.data, status=status.HTTP_200_OK)
