from xraypent.cli import main

main()
