import sys

from onlineseg.cli import main

sys.exit(main())
