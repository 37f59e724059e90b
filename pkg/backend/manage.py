#!/usr/bin/env python
"""
Command-line entry point.

Besides Django's own commands this exposes the solver commands:

    python manage.py evolve     --preset three-level --times 0:5:0.5
    python manage.py kraus      --preset two-level --dephasing 0.3 --time 1
    python manage.py crosscheck --model model.json --times 0.1,1,10
    python manage.py bench      --sizes 8,16,32,64 --channels 2
"""
import os
import sys


def main():
    os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'backend.settings')
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Install the requirements "
            "(pip install -r requirements.txt) into the active environment."
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == '__main__':
    main()
