import sys

from .satcli import main

sys.exit(main())
