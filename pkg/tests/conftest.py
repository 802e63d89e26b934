import sys
from pathlib import Path

# make `import oracles` work regardless of the pytest rootdir
sys.path.insert(0, str(Path(__file__).resolve().parent))
