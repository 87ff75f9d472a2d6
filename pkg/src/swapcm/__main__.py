import sys

from swapcm.cli import main

sys.exit(main())
