import sys

from miq.cli import main

sys.exit(main())
