import sys

from ptl.cli import main

sys.exit(main())
