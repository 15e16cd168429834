import sys

from finsm.cli import main

sys.exit(main())
