from src.rydberg_ramsey.cli import main

raise SystemExit(main())
