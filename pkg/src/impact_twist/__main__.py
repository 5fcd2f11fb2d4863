import sys

from impact_twist.cli.main import main

sys.exit(main())
