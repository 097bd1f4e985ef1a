from partcert.cli import main

raise SystemExit(main())
