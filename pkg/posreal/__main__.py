from posreal.cli import main

main()
