import sys

from coarse_menger.cli import main

sys.exit(main())
