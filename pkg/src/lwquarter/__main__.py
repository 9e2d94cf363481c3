import sys

from lwquarter.cli import main

sys.exit(main())
