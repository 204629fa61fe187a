from hgflow._cli import main

main()
