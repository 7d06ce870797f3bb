import sys

from chainrisk.main import main

sys.exit(main())
