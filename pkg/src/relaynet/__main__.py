import sys

from relaynet.cli import main

sys.exit(main())
