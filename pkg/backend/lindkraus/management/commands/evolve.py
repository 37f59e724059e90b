import logging

from django.core.management.base import BaseCommand

from lindkraus import cli
from lindkraus.kraus_solver import solved_evolve
from lindkraus.serializers import TrajectoryPointSerializer

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    help = "Evolve an initial state under a Lindblad model and print rho(t) on a time grid."

    def add_arguments(self, parser):
        cli.add_model_arguments(parser)
        cli.add_state_arguments(parser)
        cli.add_common_arguments(parser)
        parser.add_argument("--times", default="0:1:0.1", help="start:stop:step, t, or t1,t2,...")

    def handle(self, *args, **options):
        with cli.exit_codes():
            tolerances = cli.tolerances_from_options(options)
            loaded = cli.load_model(options, tolerances)
            if options["dump_model"]:
                self.stdout.write(cli.render_json(loaded.model.to_dict()))
                return
            rho0 = cli.load_state(options, loaded.model.dim)
            times = cli.parse_times(options["times"])

            points = []
            for t in times:
                rho = rho0 if t == 0 else solved_evolve(loaded.model, rho0, t, tolerances)
                points.append({
                    "t": t,
                    "rho": rho,
                    "trace_deviation": rho.trace_deviation,
                    "min_eigenvalue": rho.min_eigenvalue,
                    "purity": rho.purity,
                })
            logger.info("Evolved N=%d model over %d time point(s)", loaded.model.dim, len(times))

            if options["out"] == "json":
                data = TrajectoryPointSerializer(points, many=True).data
                self.stdout.write(cli.render_json(data))
                return
            header = ["t"] + cli.matrix_columns(loaded.model.dim) + [
                "trace_deviation", "min_eigenvalue", "purity"]
            rows = (
                [p["t"]] + cli.matrix_values(p["rho"].mat)
                + [p["trace_deviation"], p["min_eigenvalue"], p["purity"]]
                for p in points
            )
            cli.write_csv(self.stdout, header, rows)
