import sys

from secrecy_regions.cli import main

if __name__ == "__main__":
    sys.exit(main())
