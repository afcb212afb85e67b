# Import necessary packages here
import os
import sys

from keplerwave.main import main

# ==========================================================================================
# ==========================================================================================

# File:    kwave.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file launches the keplerwave command line from a source checkout, using
#          the logging configuration stored next to it
# ==========================================================================================
# ==========================================================================================
# Insert Code here


if getattr(sys, "frozen", False):
    # bundled with pyinstaller
    application_path = sys._MEIPASS
else:
    application_path = os.path.dirname(os.path.abspath(__file__))

log_file = os.path.join(application_path, "keplerwave", "data", "log_handlers.json")

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:], log_file))
# ==========================================================================================
# ==========================================================================================
# eof
