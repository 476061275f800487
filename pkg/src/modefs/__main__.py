import sys

from modefs.cli import main

sys.exit(main())
