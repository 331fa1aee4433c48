import sys

from pdmkepler.cli import main

sys.exit(main())
