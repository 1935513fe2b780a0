import masker.masker

if __name__ == "__main__":
    masker.masker.main()
