# fixtures/__init__.py
