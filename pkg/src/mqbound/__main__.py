import sys

from mqbound.cli import main

sys.exit(main())
