import sys

from crim.cli import main

sys.exit(main())
