from django.core.management.base import BaseCommand

from lindkraus import cli
from lindkraus.core import SchemaError
from lindkraus.kraus_solver import solved_kraus_set
from lindkraus.serializers import KrausListingSerializer


class Command(BaseCommand):
    help = "Print the Kraus operators of the solved map at one time as JSON."

    def add_arguments(self, parser):
        cli.add_model_arguments(parser)
        cli.add_common_arguments(parser)
        parser.add_argument("--time", type=float, default=1.0, help="Evolution time t >= 0")

    def handle(self, *args, **options):
        with cli.exit_codes():
            tolerances = cli.tolerances_from_options(options)
            loaded = cli.load_model(options, tolerances)
            if options["dump_model"]:
                self.stdout.write(cli.render_json(loaded.model.to_dict()))
                return
            t = options["time"]
            if not t >= 0:
                raise SchemaError(f"--time must be non-negative, got {t}")
            kraus = solved_kraus_set(loaded.model, t, tolerances)
            listing = KrausListingSerializer({
                "t": t,
                "operators": list(kraus.operators),
                "completeness_residual": kraus.completeness_residual(),
            })
            self.stdout.write(cli.render_json(listing.data))
