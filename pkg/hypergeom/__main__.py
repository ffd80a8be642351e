import sys

from hypergeom.main import main

sys.exit(main())
