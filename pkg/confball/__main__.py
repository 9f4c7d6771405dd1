import sys

from confball.cli import main

sys.exit(main())
