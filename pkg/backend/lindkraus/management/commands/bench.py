import logging
import time

import numpy as np
from django.core.management.base import BaseCommand

from lindkraus import cli, conf
from lindkraus.core import SchemaError, random_density_matrix, random_model
from lindkraus.kraus_solver import evolve
from lindkraus.oracle import oracle_evolve

logger = logging.getLogger(__name__)

COLUMNS = ["N", "channels", "gamma_dim", "t_closed", "t_oracle", "max_abs_diff"]


class Command(BaseCommand):
    help = "Time the Kraus-form solver against the dense oracle on random few-channel models."

    def add_arguments(self, parser):
        cli.add_common_arguments(parser, dump_model=False)
        parser.add_argument("--sizes", default="8,16,32,64", help="Comma-separated dimensions N")
        parser.add_argument("--channels", type=int, default=2, help="Coupled level pairs per model")
        parser.add_argument("--time", type=float, default=1.0, help="Evolution time")
        parser.add_argument("--oracle-max-dim", type=int, default=None,
                            help="Skip the oracle above this N (default from settings)")

    def handle(self, *args, **options):
        with cli.exit_codes():
            tolerances = cli.tolerances_from_options(options)
            sizes = [int(n) for n in cli.parse_floats(options["sizes"])]
            if not sizes or min(sizes) < 2:
                raise SchemaError("--sizes needs dimensions N >= 2")
            if options["time"] < 0:
                raise SchemaError("--time must be non-negative")
            max_dim = options["oracle_max_dim"] or conf.oracle_max_dim()
            rng = np.random.default_rng(options["seed"])

            rows = []
            for dim in sizes:
                try:
                    model = random_model(dim, options["channels"], rng)
                except ValueError as exc:
                    raise SchemaError(str(exc)) from exc
                rho0 = random_density_matrix(dim, rng)

                start = time.perf_counter()
                rho = evolve(model, rho0, options["time"], tolerances)
                t_closed = time.perf_counter() - start

                row = {
                    "N": dim,
                    "channels": options["channels"],
                    "gamma_dim": len(model.channel_set),
                    "t_closed": t_closed,
                    "t_oracle": None,
                    "max_abs_diff": None,
                }
                if dim <= max_dim:
                    start = time.perf_counter()
                    reference = oracle_evolve(model, rho0, options["time"], max_dim)
                    row["t_oracle"] = time.perf_counter() - start
                    row["max_abs_diff"] = float(np.max(np.abs(reference.mat - rho.mat)))
                else:
                    logger.info("Oracle skipped for N=%d (limit %d)", dim, max_dim)
                logger.info("bench N=%d: %s", dim, row)
                rows.append(row)

        if options["out"] == "json":
            self.stdout.write(cli.render_json(rows))
            return
        cli.write_csv(self.stdout, COLUMNS,
                      ([("" if row[c] is None else row[c]) for c in COLUMNS] for row in rows))
