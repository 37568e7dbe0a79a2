import sys

from iwt53.cli import main

sys.exit(main())
