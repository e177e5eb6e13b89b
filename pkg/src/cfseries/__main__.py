import sys

from cfseries.cli import main

sys.exit(main())
