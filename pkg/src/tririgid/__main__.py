import sys

from tririgid.cli import main

sys.exit(main())
